//! SVG and ASCII pictures.
//!
//! A diagram is drawn as its cross-section (nested circles, children evenly
//! spaced along the parent's horizontal diameter) above a side view of the
//! cylinder in which each muffler is a rectangle spanning its outer disk
//! horizontally and its time interval vertically, time running upwards.
//! Coordinates are printed with three decimals so output is byte-stable.

use std::fmt::Write;

use crate::cubes::{AffineMap1, CubesElement};
use crate::diagrams::InfectionDiagram;
use crate::diskforest::{DiskForest, NodeId, ROOT};
use crate::overlap::OverlapElement;
use crate::rational::{Rational, Show};

pub enum Figure<'a> {
    Diagram(&'a InfectionDiagram),
    Cubes(&'a CubesElement),
    Overlap(&'a OverlapElement),
}

const SIZE: f64 = 400.0;
const PAD: f64 = 20.0;
const BAR: usize = 40;

fn f(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
}

/// Circle of every disk: `(cx, cy, r)` indexed by node.
pub fn disk_layout(forest: &DiskForest) -> Vec<(f64, f64, f64)> {
    let mut out = vec![(0.0, 0.0, 0.0); forest.len()];
    out[ROOT] = (PAD + SIZE / 2.0, PAD + SIZE / 2.0, SIZE / 2.0);
    for n in forest.top_down() {
        let (cx, cy, r) = out[n];
        let ch = forest.children(n);
        let k = ch.len() as f64;
        for (i, c) in ch.into_iter().enumerate() {
            out[c] = (cx - r + (2 * i + 1) as f64 * r / k, cy, 0.85 * r / k);
        }
    }
    out
}

fn diagram_svg(d: &InfectionDiagram) -> String {
    let forest = d.forest();
    let layout = disk_layout(forest);
    let marked = d.marked();
    let width = SIZE + 2.0 * PAD;
    let side_top = SIZE + 3.0 * PAD;
    let height = side_top + SIZE + PAD;
    let mut out = String::new();
    header(&mut out, width, height);
    out.push_str("<g id=\"cross-section\" fill=\"none\" stroke=\"black\">\n");
    for n in forest.top_down() {
        let (cx, cy, r) = layout[n];
        let style = if d.output() >= 2 && marked.contains(&n) {
            " fill=\"#c33\" fill-opacity=\"0.3\""
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "<circle data-node=\"{}\" cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"{r:.3}\"{style}/>",
            forest.name(n)
        );
    }
    out.push_str("</g>\n<g id=\"side-view\" stroke=\"black\">\n");
    let _ = writeln!(
        out,
        "<rect x=\"{PAD:.3}\" y=\"{side_top:.3}\" width=\"{SIZE:.3}\" height=\"{SIZE:.3}\" fill=\"none\"/>"
    );
    let y_of = |t: Rational| side_top + (1.0 - f(t)) * SIZE;
    for (i, m) in d.mufflers().iter().enumerate() {
        let (cx, _, r) = layout[m.outer];
        let (y0, y1) = (y_of(m.time.hi()), y_of(m.time.lo()));
        let _ = writeln!(
            out,
            "<rect data-muffler=\"{}\" data-outer=\"{}\" x=\"{:.3}\" y=\"{y0:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"#88a\" fill-opacity=\"0.4\"/>",
            i + 1,
            forest.name(m.outer),
            cx - r,
            2.0 * r,
            y1 - y0
        );
        if m.color >= 2 {
            for &h in &m.holes {
                let (hx, _, hr) = layout[h];
                let _ = writeln!(
                    out,
                    "<rect data-hole=\"{}\" x=\"{:.3}\" y=\"{y0:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"white\"/>",
                    forest.name(h),
                    hx - hr,
                    2.0 * hr,
                    y1 - y0
                );
            }
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\">{}</text>",
            cx - r + 4.0,
            y0 + 14.0,
            i + 1
        );
    }
    if d.output() >= 2 {
        for &s in &marked {
            let (x, _, _) = layout[s];
            let _ = writeln!(
                out,
                "<line data-strand=\"{}\" x1=\"{x:.3}\" y1=\"{side_top:.3}\" x2=\"{x:.3}\" y2=\"{:.3}\" stroke=\"#c33\"/>",
                forest.name(s),
                side_top + SIZE
            );
        }
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Time intervals as vertical slots in a unit strip, one column per slot so
/// overlaps stay visible.
fn intervals_svg(intervals: &[AffineMap1], columns: bool) -> String {
    let width = SIZE + 2.0 * PAD;
    let height = SIZE + 2.0 * PAD;
    let mut out = String::new();
    header(&mut out, width, height);
    let _ = writeln!(
        out,
        "<rect x=\"{PAD:.3}\" y=\"{PAD:.3}\" width=\"{SIZE:.3}\" height=\"{SIZE:.3}\" fill=\"none\" stroke=\"black\"/>"
    );
    let n = intervals.len().max(1) as f64;
    for (i, a) in intervals.iter().enumerate() {
        let (x, w) = if columns {
            (PAD + i as f64 * SIZE / n, SIZE / n)
        } else {
            (PAD, SIZE)
        };
        let y0 = PAD + (1.0 - f(a.hi())) * SIZE;
        let h = f(a.hi() - a.lo()) * SIZE;
        let _ = writeln!(
            out,
            "<rect data-slot=\"{}\" x=\"{x:.3}\" y=\"{y0:.3}\" width=\"{w:.3}\" height=\"{h:.3}\" fill=\"#88a\" fill-opacity=\"0.4\" stroke=\"black\"/>",
            i + 1
        );
    }
    out.push_str("</svg>\n");
    out
}

fn cubes_svg(e: &CubesElement) -> String {
    if e.dim() != 2 {
        let slots: Vec<AffineMap1> = e.cubes().iter().map(|c| c.axes[0].clone()).collect();
        return intervals_svg(&slots, false);
    }
    let width = SIZE + 2.0 * PAD;
    let mut out = String::new();
    header(&mut out, width, width);
    let _ = writeln!(
        out,
        "<rect x=\"{PAD:.3}\" y=\"{PAD:.3}\" width=\"{SIZE:.3}\" height=\"{SIZE:.3}\" fill=\"none\" stroke=\"black\"/>"
    );
    for (i, c) in e.cubes().iter().enumerate() {
        let (a, b) = (&c.axes[0], &c.axes[1]);
        let _ = writeln!(
            out,
            "<rect data-slot=\"{}\" x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"#88a\" fill-opacity=\"0.4\" stroke=\"black\"/>",
            i + 1,
            PAD + f(a.lo()) * SIZE,
            PAD + (1.0 - f(b.hi())) * SIZE,
            f(a.scale()) * SIZE,
            f(b.scale()) * SIZE
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn svg(fig: &Figure) -> String {
    match fig {
        Figure::Diagram(d) => diagram_svg(d),
        Figure::Cubes(e) => cubes_svg(e),
        Figure::Overlap(e) => intervals_svg(e.intervals(), true),
    }
}

fn bar(a: &AffineMap1) -> String {
    let lo = (f(a.lo()) * BAR as f64).round() as usize;
    let hi = ((f(a.hi()) * BAR as f64).round() as usize).max(lo + 1).min(BAR);
    (0..BAR)
        .map(|i| if i >= lo && i < hi { '#' } else { '.' })
        .collect()
}

fn forest_ascii(forest: &DiskForest, marked: &[NodeId], out: &mut String) {
    fn walk(forest: &DiskForest, marked: &[NodeId], n: NodeId, depth: usize, out: &mut String) {
        let tag = if marked.contains(&n) { " *" } else { "" };
        let _ = writeln!(out, "{}{}{tag}", "  ".repeat(depth), forest.name(n));
        for c in forest.children(n) {
            walk(forest, marked, c, depth + 1, out);
        }
    }
    walk(forest, marked, ROOT, 0, out);
}

pub fn ascii(fig: &Figure) -> String {
    let mut out = String::new();
    match fig {
        Figure::Diagram(d) => {
            let marked = if d.output() >= 2 { d.marked() } else { Vec::new() };
            let _ = writeln!(out, "cross-section (* = strand):");
            forest_ascii(d.forest(), &marked, &mut out);
            let _ = writeln!(out, "mufflers (time 0 -> 1):");
            for (i, m) in d.mufflers().iter().enumerate() {
                let holes: Vec<&str> = m.holes.iter().map(|&h| d.forest().name(h)).collect();
                let _ = writeln!(
                    out,
                    "{:>3} |{}| ({},{}) outer={} holes=({})",
                    i + 1,
                    bar(&m.time),
                    Show(&m.time.lo()),
                    Show(&m.time.hi()),
                    d.forest().name(m.outer),
                    holes.join(",")
                );
            }
            let _ = writeln!(out, "order {}", d.order());
        }
        Figure::Cubes(e) => {
            for (i, c) in e.cubes().iter().enumerate() {
                let _ = writeln!(out, "{:>3} |{}| {c}", i + 1, bar(&c.axes[0]));
            }
        }
        Figure::Overlap(e) => {
            for (i, a) in e.intervals().iter().enumerate() {
                let _ = writeln!(out, "{:>3} |{}| {a}", i + 1, bar(a));
            }
            let _ = writeln!(out, "order {}", e.order());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::identity_diagram;
    use crate::rational::rat;

    #[test]
    fn identity_is_one_full_rectangle() {
        let d = identity_diagram(2);
        let s = svg(&Figure::Diagram(&d));
        assert_eq!(s.matches("data-muffler=").count(), 1);
        assert!(s.contains("data-muffler=\"1\" data-outer=\"root\" x=\"20.000\" y=\"460.000\" width=\"400.000\" height=\"400.000\""));
        assert_eq!(s.matches("<circle").count(), 3);
        assert_eq!(s, svg(&Figure::Diagram(&d)));
    }

    #[test]
    fn stacking_shows_three_slots() {
        let e = CubesElement::intervals(&[
            (rat(0, 1), rat(1, 3)),
            (rat(1, 3), rat(2, 3)),
            (rat(2, 3), rat(1, 1)),
        ])
        .unwrap();
        let s = svg(&Figure::Cubes(&e));
        assert_eq!(s.matches("data-slot=").count(), 3);
        let a = ascii(&Figure::Cubes(&e));
        assert_eq!(a.lines().count(), 3);
        assert!(a.lines().next().unwrap().contains("|#############..."));
    }

    #[test]
    fn children_sit_inside_parents() {
        let mut forest = DiskForest::standard(2);
        let m1 = forest.marked(2).unwrap()[0];
        forest.add_child(m1, "a");
        forest.add_child(m1, "b");
        let layout = disk_layout(&forest);
        for n in forest.nodes() {
            if let Some(p) = forest.parent(n) {
                let ((cx, cy, r), (px, py, pr)) = (layout[n], layout[p]);
                assert!(((cx - px).powi(2) + (cy - py).powi(2)).sqrt() + r < pr);
            }
        }
    }
}
