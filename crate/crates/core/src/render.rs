//! TikZ and SVG pictures of polytopes in the plane.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::analysis::default_sample;
use crate::eps::{decimal_string, OrderingContext};
use crate::equation::WeierstrassEquation;
use crate::error::AnalysisError;
use crate::field::format_rational;
use crate::hull::{NHPolytope, PolytopeContext};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Tikz,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tikz" => Ok(Format::Tikz),
            "svg" => Ok(Format::Svg),
            other => Err(format!("unknown figure format `{other}` (expected tikz or svg)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    pub format: Format,
    /// Upper corner of the picture; derived from the points when `None`.
    pub viewport: Option<(BigRational, BigRational)>,
    /// Value of ε for infinitesimal polytopes; derived from the sweep when `None`.
    pub sample_q: Option<BigRational>,
    pub decimals: u32,
    pub shade: bool,
    pub markers: bool,
    pub ticks: bool,
    /// SVG pixels per unit.
    pub svg_scale: u32,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            format: Format::Tikz,
            viewport: None,
            sample_q: None,
            decimals: 6,
            shade: true,
            markers: true,
            ticks: true,
            svg_scale: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Figure {
    pub text: String,
    /// The ε used to place the points, if any.
    pub sample_q: Option<String>,
    /// Printed vertex coordinates, in the figure's rounding.
    pub vertices: Vec<(String, String)>,
}

type Pt = (BigRational, BigRational);

/// Clips a polygon to the box [0, w] × [0, h].
fn clip(poly: Vec<Pt>, w: &BigRational, h: &BigRational) -> Vec<Pt> {
    let zero = BigRational::zero();
    // Each edge as (axis, bound, keep side ≤ bound when true).
    let edges: [(usize, &BigRational, bool); 4] = [(0, &zero, false), (0, w, true), (1, &zero, false), (1, h, true)];
    let mut out = poly;
    for (axis, bound, upper) in edges {
        let inside = |p: &Pt| {
            let v = if axis == 0 { &p.0 } else { &p.1 };
            if upper {
                v <= bound
            } else {
                v >= bound
            }
        };
        let cross = |a: &Pt, b: &Pt| {
            let (av, bv) = if axis == 0 { (&a.0, &b.0) } else { (&a.1, &b.1) };
            let t = (bound - av) / (bv - av);
            (&a.0 + &t * (&b.0 - &a.0), &a.1 + &t * (&b.1 - &a.1))
        };
        let input = std::mem::take(&mut out);
        for i in 0..input.len() {
            let cur = &input[i];
            let prev = &input[(i + input.len() - 1) % input.len()];
            match (inside(prev), inside(cur)) {
                (true, true) => out.push(cur.clone()),
                (true, false) => out.push(cross(prev, cur)),
                (false, true) => {
                    out.push(cross(prev, cur));
                    out.push(cur.clone());
                }
                (false, false) => {}
            }
        }
        out.dedup();
        if out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
    }
    out
}

fn ceil(r: &BigRational) -> BigRational {
    BigRational::from_integer(r.ceil().to_integer())
}

/// A picture of a planar polytope. Points depending on ε are placed at the
/// context's value, or at `spec.sample_q` (default: inside the leftmost
/// sweep interval) for an infinitesimal polytope.
pub fn render_figure(poly: &NHPolytope, f: &WeierstrassEquation, spec: &RenderSpec) -> Result<Figure, AnalysisError> {
    if poly.m() != 2 {
        return Err(AnalysisError::Unsupported(format!("figures need m = 2, got m = {}", poly.m())));
    }
    let sample = match poly.context() {
        PolytopeContext::Classical => None,
        PolytopeContext::Perturbed(OrderingContext::At(q)) => Some(q.clone()),
        PolytopeContext::Perturbed(OrderingContext::Infinitesimal) => {
            Some(spec.sample_q.clone().unwrap_or_else(|| default_sample(f)))
        }
    };
    if sample.as_ref().is_some_and(|q| q <= &BigRational::zero()) {
        return Err(AnalysisError::Unsupported("the sample epsilon must be positive".into()));
    }
    let place = |c: &crate::eps::EpsNumber| -> Result<BigRational, AnalysisError> {
        Ok(match &sample {
            Some(q) => c.eval(q)?,
            None => c.as_rational().ok_or(crate::error::EpsError::NotConstant)?,
        })
    };
    let pts: Vec<(Pt, usize)> = poly
        .points()
        .iter()
        .map(|p| Ok(((place(&p.coords[0])?, place(&p.coords[1])?), p.provenance.len())))
        .collect::<Result<_, AnalysisError>>()?;
    let mut verts: Vec<Pt> = poly.vertices().iter().map(|&v| pts[v].0.clone()).collect();
    verts.sort();

    let (w, h) = match &spec.viewport {
        Some((w, h)) => {
            if w <= &BigRational::zero() || h <= &BigRational::zero() {
                return Err(AnalysisError::Unsupported("the viewport must be positive".into()));
            }
            (w.clone(), h.clone())
        }
        None => {
            let top = pts
                .iter()
                .flat_map(|((x, y), _)| [x.clone(), y.clone()])
                .max()
                .unwrap_or_else(BigRational::one);
            let side = ceil(&top) + BigRational::one();
            (side.clone(), side)
        }
    };

    // The region from the right edge, along the vertices right to left, and
    // back through the top corners.
    let region = if verts.is_empty() {
        vec![(BigRational::zero(), BigRational::zero()), (w.clone(), BigRational::zero()), (w.clone(), h.clone()), (BigRational::zero(), h.clone())]
    } else {
        let far_x = verts.iter().map(|v| v.0.clone()).max().unwrap().max(w.clone());
        let far_y = verts.iter().map(|v| v.1.clone()).max().unwrap().max(h.clone());
        let mut r = vec![(far_x.clone(), verts.last().unwrap().1.clone())];
        r.extend(verts.iter().rev().cloned());
        r.push((verts[0].0.clone(), far_y.clone()));
        r.push((far_x, far_y));
        r.dedup();
        clip(r, &w, &h)
    };

    let d = spec.decimals;
    let num = |r: &BigRational| decimal_string(r, d);
    let vertices = verts.iter().map(|(x, y)| (num(x), num(y))).collect();
    let text = match spec.format {
        Format::Tikz => tikz(&region, &pts, &w, &h, spec, &sample, poly.is_empty(), &num),
        Format::Svg => svg(&region, &pts, &w, &h, spec, &sample, poly.is_empty(), &num),
    };
    Ok(Figure { text, sample_q: sample.as_ref().map(format_rational), vertices })
}

fn header_note(sample: &Option<BigRational>, empty: bool) -> Vec<String> {
    let mut notes = Vec::new();
    if let Some(q) = sample {
        notes.push(format!("points placed at epsilon = {}", format_rational(q)));
    }
    if empty {
        notes.push("empty polytope: the support is empty and the whole quadrant is shaded".into());
    }
    notes
}

#[allow(clippy::too_many_arguments)]
fn tikz(
    region: &[Pt],
    pts: &[(Pt, usize)],
    w: &BigRational,
    h: &BigRational,
    spec: &RenderSpec,
    sample: &Option<BigRational>,
    empty: bool,
    num: &dyn Fn(&BigRational) -> String,
) -> String {
    let mut s = String::new();
    for note in header_note(sample, empty) {
        let _ = writeln!(s, "% {note}");
    }
    s.push_str("\\begin{tikzpicture}\n");
    s.push_str("\\tikzset{\n    every point/.style = {circle, inner sep={1.75\\pgflinewidth}, \n        opacity=1, draw, solid, fill\n    },\n");
    s.push_str("    point/.style={insert path={node[every point, #1]{}}}, point/.default={},\n");
    s.push_str("    point name/.style = {insert path={coordinate (#1)}},\n}\n");
    let zero = BigRational::zero();
    if spec.shade && !region.is_empty() {
        s.push_str("\\fill[black!20] ");
        for (x, y) in region {
            let _ = write!(s, "({},{})  -- ", num(x), num(y));
        }
        s.push_str("cycle;\n");
    }
    let _ = writeln!(s, "\\draw[->] ({},{})  -- ({},{})  ;", num(&zero), num(&zero), num(w), num(&zero));
    let _ = writeln!(s, "\\draw[->] ({},{})  -- ({},{})  ;", num(&zero), num(&zero), num(&zero), num(h));
    if spec.ticks {
        let wx = w.ceil().to_integer();
        let hy = h.ceil().to_integer();
        let mut i = num_bigint::BigInt::zero();
        while i < wx {
            let _ = writeln!(s, "\\draw[very thin] ({i},0) -- ({i},-3pt) node[below] {{${i}$}};");
            i += 1;
        }
        let mut j = num_bigint::BigInt::one();
        while j < hy {
            let _ = writeln!(s, "\\draw[very thin] (0,{j}) -- (-3pt,{j}) node[left] {{${j}$}}; ");
            j += 1;
        }
    }
    if spec.markers {
        for ((x, y), mult) in pts {
            let _ = writeln!(s, "    \\draw ({},{})  [point];", num(x), num(y));
            if *mult > 1 {
                let _ = writeln!(s, "    \\node[above right, font=\\tiny] at ({},{}) {{$\\times {mult}$}};", num(x), num(y));
            }
        }
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

#[allow(clippy::too_many_arguments)]
fn svg(
    region: &[Pt],
    pts: &[(Pt, usize)],
    w: &BigRational,
    h: &BigRational,
    spec: &RenderSpec,
    sample: &Option<BigRational>,
    empty: bool,
    num: &dyn Fn(&BigRational) -> String,
) -> String {
    let scale = BigRational::from_integer(spec.svg_scale.into());
    let margin = BigRational::from_integer(30.into());
    let px = |x: &BigRational| num(&(&margin + x * &scale));
    let py = |y: &BigRational| num(&(&margin + (h - y) * &scale));
    let width = num(&(w * &scale + &margin * BigRational::from_integer(2.into())));
    let height = num(&(h * &scale + &margin * BigRational::from_integer(2.into())));
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    for note in header_note(sample, empty) {
        let _ = writeln!(s, "<!-- {note} -->");
    }
    let zero = BigRational::zero();
    if spec.shade && !region.is_empty() {
        let path: Vec<String> = region.iter().map(|(x, y)| format!("{},{}", px(x), py(y))).collect();
        let _ = writeln!(s, "<polygon points=\"{}\" fill=\"#cccccc\" stroke=\"none\"/>", path.join(" "));
    }
    let _ = writeln!(s, "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>", px(&zero), py(&zero), px(w), py(&zero));
    let _ = writeln!(s, "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>", px(&zero), py(&zero), px(&zero), py(h));
    if spec.ticks {
        let wx: i64 = w.ceil().to_integer().try_into().unwrap_or(i64::MAX);
        let hy: i64 = h.ceil().to_integer().try_into().unwrap_or(i64::MAX);
        for i in 0..wx {
            let x = BigRational::from_integer(i.into());
            let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{i}</text>", px(&x), num(&(&margin + h * &scale + BigRational::from_integer(16.into()))));
        }
        for j in 1..hy {
            let y = BigRational::from_integer(j.into());
            let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{j}</text>", num(&(&margin - BigRational::from_integer(6.into()))), py(&y));
        }
    }
    if spec.markers {
        for ((x, y), mult) in pts {
            let _ = writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"/>", px(x), py(y));
            if *mult > 1 {
                let _ = writeln!(s, "<text x=\"{}\" y=\"{}\" font-size=\"9\">×{mult}</text>", px(x), py(y));
            }
        }
    }
    s.push_str("</svg>\n");
    s
}
