//! Rank-2 tilings as SVG: Delaunay edges solid, Voronoi edges dashed,
//! lattice points as dots and the fundamental domain shaded.
//!
//! Lattice coordinates in `[-2, 3]²` map to pixels at 100 per unit, with
//! the `y` axis pointing up.

use std::collections::BTreeSet;
use std::fmt::Write;

use num_traits::Signed;

use sqav_core::delaunay::StarComplex;
use sqav_core::linalg::{rat, rat_int, IntVec, Rat, RatVec};

const LO: i64 = -2;
const HI: i64 = 3;
const SCALE: i64 = 100;

/// Pixel value rounded to two decimals, exactly.
fn px(v: &Rat) -> String {
    let hundredths = (v * rat_int(100) + rat(1, 2)).floor().to_integer();
    let neg = hundredths.is_negative();
    let a = hundredths.abs();
    let digits = format!("{:0>3}", a.to_string());
    let (int, frac) = digits.split_at(digits.len() - 2);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

fn to_px(p: &RatVec) -> (String, String) {
    let x = (&p[0] - rat_int(LO)) * rat_int(SCALE);
    let y = (rat_int(HI) - &p[1]) * rat_int(SCALE);
    (px(&x), px(&y))
}

fn inside(p: &RatVec) -> bool {
    p.iter().all(|c| *c >= rat_int(LO) && *c <= rat_int(HI))
}

fn shifts() -> Vec<IntVec> {
    let mut out = Vec::new();
    for a in LO - 4..=HI + 4 {
        for b in LO - 4..=HI + 4 {
            out.push(IntVec(vec![a, b]));
        }
    }
    out
}

fn line(out: &mut String, a: &RatVec, b: &RatVec, style: &str) {
    let (x1, y1) = to_px(a);
    let (x2, y2) = to_px(b);
    writeln!(out, r#"  <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" {style}/>"#).unwrap();
}

/// The tiling of a rank-2 star. The caller checks the rank.
pub fn render(star: &StarComplex) -> String {
    let size = (HI - LO) * SCALE;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    )
    .unwrap();
    let corners = [[0, 0], [1, 0], [1, 1], [0, 1]];
    let pts: Vec<String> = corners
        .iter()
        .map(|c| {
            let (x, y) = to_px(&RatVec::from_ints(c));
            format!("{x},{y}")
        })
        .collect();
    writeln!(out, r##"  <polygon points="{}" fill="#e8eef8" stroke="none"/>"##, pts.join(" ")).unwrap();

    let edges: Vec<usize> = (0..star.cells().len()).filter(|&i| star.cell(i).dim() == 1).collect();
    let mut delaunay: BTreeSet<(RatVec, RatVec)> = BTreeSet::new();
    let mut voronoi: BTreeSet<(RatVec, RatVec)> = BTreeSet::new();
    for t in shifts() {
        for &e in &edges {
            let v = star.cell(e).vertices();
            let a = (&v[0] + &t).to_rat();
            let b = (&v[1] + &t).to_rat();
            if inside(&a) && inside(&b) {
                delaunay.insert((a, b));
            }
            let over = star.maximal_over(e);
            if over.len() == 2 {
                let h1 = star.cell(over[0]).hole().add_int(&t);
                let h2 = star.cell(over[1]).hole().add_int(&t);
                if inside(&h1) && inside(&h2) {
                    voronoi.insert(if h1 <= h2 { (h1, h2) } else { (h2, h1) });
                }
            }
        }
    }
    writeln!(out, r#"  <g id="delaunay">"#).unwrap();
    for (a, b) in &delaunay {
        line(&mut out, a, b, r#"stroke="black" stroke-width="2""#);
    }
    writeln!(out, "  </g>").unwrap();
    writeln!(out, r#"  <g id="voronoi">"#).unwrap();
    for (a, b) in &voronoi {
        line(&mut out, a, b, r#"stroke="gray" stroke-width="1.5" stroke-dasharray="6,4""#);
    }
    writeln!(out, "  </g>").unwrap();
    writeln!(out, r#"  <g id="lattice">"#).unwrap();
    for a in LO..=HI {
        for b in LO..=HI {
            let (x, y) = to_px(&RatVec::from_ints(&[a, b]));
            writeln!(out, r#"    <circle cx="{x}" cy="{y}" r="4" fill="black"/>"#).unwrap();
        }
    }
    writeln!(out, "  </g>").unwrap();
    let (x, y) = to_px(&RatVec::from_ints(&[0, 0]));
    writeln!(out, r#"  <text x="{x}" y="{y}" dx="6" dy="16" font-size="14">0</text>"#).unwrap();
    writeln!(out, "</svg>").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use sqav_core::delaunay::{star, StarOptions};
    use sqav_core::GramForm;

    #[test]
    fn pixel_rounding() {
        assert_eq!(px(&rat(1, 3)), "0.33");
        assert_eq!(px(&rat(250, 1)), "250.00");
        assert_eq!(px(&rat(-1, 8)), "-0.12");
        assert_eq!(px(&rat(2, 3)), "0.67");
    }

    #[test]
    fn square_tiling_counts() {
        let s = star(&GramForm::identity(2), StarOptions::default()).unwrap();
        let svg = render(&s);
        // 6 × 5 horizontal and 5 × 6 vertical unit edges in [-2,3]²
        let solid = svg.matches(r#"stroke="black""#).count();
        assert_eq!(solid, 60);
        assert_eq!(svg.matches("<circle").count(), 36);
        assert!(svg.contains("stroke-dasharray"));
    }
}
