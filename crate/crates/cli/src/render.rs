//! Sampling a solution on a rational grid and writing it as CSV or SVG.

use std::fmt::Write;

use rayon::prelude::*;
use udkdv_core::rational::{self, Rational};
use udkdv_core::scattering::{reconstruction_chain, synthesize, SpectralData};
use udkdv_core::texpr::{self, induced_state, DressingChain, TExpr};
use udkdv_core::{Result, State};

pub enum Source {
    Spectral(SpectralData, DressingChain),
    Expr(TExpr),
}

impl Source {
    pub fn spectral(d: SpectralData) -> Result<Self> {
        let chain = reconstruction_chain(&d)?;
        Ok(Source::Spectral(d, chain))
    }

    fn state(&self, t: i64) -> Result<State> {
        match self {
            Source::Spectral(d, _) => synthesize(d, t),
            Source::Expr(e) => induced_state(e, t),
        }
    }

    fn value(&self, x: &Rational, t: i64) -> Rational {
        match self {
            Source::Spectral(_, chain) => chain.u_at(x, t),
            Source::Expr(e) => texpr::u_at(e, x, t),
        }
    }
}

pub struct Options {
    pub times: Vec<i64>,
    pub step: Rational,
    /// Explicit `[from, to]` in frame coordinates.
    pub range: Option<(Rational, Rational)>,
    /// Use `x - t` as the horizontal coordinate.
    pub comoving: bool,
}

/// One time slice in frame coordinates.
pub struct Panel {
    pub t: i64,
    pub curve: Vec<(Rational, Rational)>,
    pub dots: Vec<(i64, Rational)>,
}

pub struct Figure {
    pub from: Rational,
    pub to: Rational,
    pub panels: Vec<Panel>,
}

pub fn sample(src: &Source, opts: &Options) -> Result<Figure> {
    let states: Vec<State> = opts.times.par_iter().map(|&t| src.state(t)).collect::<Result<_>>()?;
    let shift = |t: i64| if opts.comoving { t } else { 0 };
    let (from, to) = match &opts.range {
        Some(r) => r.clone(),
        None => {
            let hull = opts
                .times
                .iter()
                .zip(&states)
                .filter(|(_, s)| !s.is_trivial())
                .map(|(&t, s)| (s.span().0 - shift(t), s.span().1 - shift(t)))
                .reduce(|a, b| (a.0.min(b.0), a.1.max(b.1)));
            let (lo, hi) = hull.map_or((-5, 5), |(lo, hi)| (lo - 2, hi + 2));
            (rational::int(lo), rational::int(hi))
        }
    };
    let panels = opts
        .times
        .par_iter()
        .zip(&states)
        .map(|(&t, s)| {
            let lab = rational::int(shift(t));
            let mut curve = Vec::new();
            let mut x = from.clone();
            while x <= to {
                let v = src.value(&(&x + &lab), t);
                curve.push((x.clone(), v));
                x += &opts.step;
            }
            let dots = (rational::ceil_i64(&from)..=rational::floor_i64(&to))
                .map(|k| (k, s.get(k + shift(t))))
                .collect();
            Panel { t, curve, dots }
        })
        .collect();
    Ok(Figure { from, to, panels })
}

pub fn csv(fig: &Figure) -> String {
    let mut out = String::from("t,x,value\n");
    for p in &fig.panels {
        for (x, v) in &p.curve {
            writeln!(out, "{},{x},{v}", p.t).unwrap();
        }
    }
    out
}

const WIDTH: i64 = 720;
const PANEL: i64 = 150;
const LEFT: i64 = 70;
const RIGHT: i64 = 20;
const TOP: i64 = 24;
const BOTTOM: i64 = 24;

/// Two-decimal fixed point, computed exactly.
fn fixed(q: &Rational) -> String {
    let n = (q * rational::int(100)).round().to_integer().to_string();
    let (sign, digits) = match n.strip_prefix('-') {
        Some(d) => ("-", d),
        None => ("", n.as_str()),
    };
    let digits = format!("{digits:0>3}");
    let (whole, frac) = digits.split_at(digits.len() - 2);
    let frac = frac.trim_end_matches('0');
    match (sign, frac) {
        (_, "") if whole == "0" => "0".to_string(),
        (s, "") => format!("{s}{whole}"),
        (s, f) => format!("{s}{whole}.{f}"),
    }
}

fn label(q: &Rational, float: bool) -> String {
    if float {
        let v = (rational::to_f64(q) * 1000.0).round() / 1000.0;
        format!("{}", v + 0.0)
    } else {
        q.to_string()
    }
}

/// Panels stacked top to bottom, each with the sampled curve as a polyline
/// and the integer cells as dots. Byte-identical for identical input.
pub fn svg(fig: &Figure, float: bool) -> String {
    let values = fig
        .panels
        .iter()
        .flat_map(|p| p.curve.iter().map(|(_, v)| v).chain(p.dots.iter().map(|(_, v)| v)));
    let (mut vmin, mut vmax) = (rational::zero(), rational::zero());
    for v in values {
        vmin = rational::min(vmin, v.clone());
        vmax = rational::max(vmax, v.clone());
    }
    if vmin == vmax {
        vmax = &vmin + rational::one();
    }
    let height = PANEL * fig.panels.len().max(1) as i64;
    let span_x = &fig.to - &fig.from;
    let plot_w = rational::int(WIDTH - LEFT - RIGHT);
    let plot_h = rational::int(PANEL - TOP - BOTTOM);
    let px = |x: &Rational| -> Rational {
        if span_x == rational::zero() {
            rational::int(LEFT)
        } else {
            rational::int(LEFT) + (x - &fig.from) / &span_x * &plot_w
        }
    };
    let py = |k: usize, v: &Rational| -> Rational {
        rational::int(k as i64 * PANEL + PANEL - BOTTOM) - (v - &vmin) / (&vmax - &vmin) * &plot_h
    };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{WIDTH}" height="{height}" fill="white"/>"#).unwrap();
    for (k, p) in fig.panels.iter().enumerate() {
        let top = k as i64 * PANEL + TOP;
        let bottom = k as i64 * PANEL + PANEL - BOTTOM;
        let (x0, x1) = (fixed(&px(&fig.from)), fixed(&px(&fig.to)));
        let zero = fixed(&py(k, &rational::zero()));
        writeln!(out, r#"<g class="panel" data-t="{}">"#, p.t).unwrap();
        writeln!(out, r#"<text x="{LEFT}" y="{}">t = {}</text>"#, top - 8, p.t).unwrap();
        writeln!(
            out,
            r##"<rect x="{x0}" y="{top}" width="{}" height="{}" fill="none" stroke="#999"/>"##,
            WIDTH - LEFT - RIGHT,
            bottom - top
        )
        .unwrap();
        writeln!(out, r##"<line x1="{x0}" y1="{zero}" x2="{x1}" y2="{zero}" stroke="#ccc"/>"##).unwrap();
        let points: Vec<String> = p
            .curve
            .iter()
            .map(|(x, v)| format!("{},{}", fixed(&px(x)), fixed(&py(k, v))))
            .collect();
        writeln!(out, r#"<polyline fill="none" stroke="black" points="{}"/>"#, points.join(" ")).unwrap();
        for (i, v) in &p.dots {
            writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="2.5" fill="crimson"/>"#,
                fixed(&px(&rational::int(*i))),
                fixed(&py(k, v))
            )
            .unwrap();
        }
        let lx = LEFT - 6;
        writeln!(out, r#"<text x="{lx}" y="{}" text-anchor="end">{}</text>"#, top + 4, label(&vmax, float)).unwrap();
        writeln!(out, r#"<text x="{lx}" y="{bottom}" text-anchor="end">{}</text>"#, label(&vmin, float)).unwrap();
        writeln!(out, r#"<text x="{x0}" y="{}">{}</text>"#, bottom + 14, label(&fig.from, float)).unwrap();
        writeln!(
            out,
            r#"<text x="{x1}" y="{}" text-anchor="end">{}</text>"#,
            bottom + 14,
            label(&fig.to, float)
        )
        .unwrap();
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use udkdv_core::rational::rat;

    #[test]
    fn fixed_point() {
        assert_eq!(fixed(&rat(1, 3)), "0.33");
        assert_eq!(fixed(&rat(-1, 3)), "-0.33");
        assert_eq!(fixed(&rat(5, 2)), "2.5");
        assert_eq!(fixed(&rat(-7, 1)), "-7");
        assert_eq!(fixed(&rat(1, 1000)), "0");
        assert_eq!(fixed(&rat(1234, 1)), "1234");
    }

    #[test]
    fn labels() {
        assert_eq!(label(&rat(2, 3), false), "2/3");
        assert_eq!(label(&rat(2, 3), true), "0.667");
        assert_eq!(label(&rat(-1, 20000), true), "0");
    }
}
