use std::fmt::Write;

use udkdv_core::conserved::ConservedProfile;
use udkdv_core::eigen::{Eigenfunction, Kind, SolitonParams};
use udkdv_core::scattering::SpectralData;
use udkdv_core::state::joint_span;
use udkdv_core::State;

/// Right-aligned columns; the first column holds row labels.
fn grid(rows: &[Vec<String>]) -> String {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..ncols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, v)| if c == 0 { format!("{v:<w$}", w = widths[0]) } else { format!("{v:>w$}", w = widths[c]) })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn row(label: &str, lo: i64, hi: i64, f: impl Fn(i64) -> String) -> Vec<String> {
    std::iter::once(label.to_string()).chain((lo..hi).map(f)).collect()
}

/// Rows `i`, `U`, `X`, `Y`, then `omega_max` and the maximal blocks.
pub fn profile(s: &State, p: &ConservedProfile) -> String {
    let (lo, hi) = joint_span([s, &p.x, &p.y]).unwrap_or((0, 1));
    let rows = [
        row("i", lo, hi, |i| i.to_string()),
        row("U", lo, hi, |i| s.get(i).to_string()),
        row("X", lo, hi, |i| p.x.get(i).to_string()),
        row("Y", lo, hi, |i| p.y.get(i).to_string()),
    ];
    let mut out = grid(&rows);
    writeln!(out, "omega_max {}", p.omega_max).unwrap();
    let blocks: Vec<String> = p.blocks.iter().map(|b| format!("[{},{}]", b.left, b.right)).collect();
    writeln!(out, "blocks {}", blocks.join(" ")).unwrap();
    out
}

/// One row per soliton, heaviest first, then the background.
pub fn spectrum(d: &SpectralData) -> String {
    let mut rows = vec![vec!["omega".to_string(), "phi".to_string()]];
    rows.extend(d.solitons.iter().map(|p| vec![p.omega.to_string(), p.phi.to_string()]));
    let mut out = grid(&rows);
    writeln!(out, "background {}", d.background).unwrap();
    writeln!(out, "origin_time {}", d.origin_time).unwrap();
    out
}

/// The two slices `t` and `t + 1` over their joint sampling window.
pub fn eigen(e0: &Eigenfunction, e1: &Eigenfunction, p: &SolitonParams) -> String {
    let (a0, b0) = e0.window();
    let (a1, b1) = e1.window();
    let (lo, hi) = (a0.min(a1), b0.max(b1));
    let kind = match e0.kind {
        Kind::Generic => "generic",
        Kind::Bound => "bound",
    };
    let mut out = format!("{kind} omega {} phi {} split {}\n", p.omega, p.phi, e0.split);
    out.push_str(&grid(&[
        row("i", lo, hi, |i| i.to_string()),
        row(&format!("t={}", e0.t), lo, hi, |i| e0.at(i).to_string()),
        row(&format!("t={}", e1.t), lo, hi, |i| e1.at(i).to_string()),
    ]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_align_right() {
        let g = grid(&[
            vec!["i".into(), "1".into(), "10".into()],
            vec!["U".into(), "1/2".into(), "0".into()],
        ]);
        assert_eq!(g, "i    1  10\nU  1/2   0\n");
    }
}
