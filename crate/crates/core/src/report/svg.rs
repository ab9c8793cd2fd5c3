//! Level diagram of `H⁻` with the raising action of `c†`: one horizontal line
//! per level, one column of arrows per unirrep chain.

use std::fmt::Write as _;

use crate::error::Result;
use crate::ladder::unirrep_partition;
use crate::wavefunction::minus_indices;

const WIDTH: f64 = 520.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 40.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 500.0;
const UNIT: f64 = 14.0;

pub fn render_diagram(m: usize, nu_max: i64) -> Result<String> {
    let chains = unirrep_partition(m, nu_max)?;
    let levels = minus_indices(m, nu_max);
    let energy = |nu: i64| 2 * (nu + m as i64 + 1);
    let step = m as i64 + 1;
    let e_top = energy(nu_max) + 2 * step;
    let height = MARGIN_TOP + MARGIN_BOTTOM + UNIT * e_top as f64;
    let y = |e: i64| MARGIN_TOP + UNIT * (e_top - e) as f64;
    let col = |i: usize| LEFT + 40.0 + (RIGHT - LEFT - 80.0) * (i as f64 + 0.5) / chains.len() as f64;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(s, r#"  <title>Spectrum of H- and action of c-dagger, m = {m}</title>"#);
    let _ = writeln!(
        s,
        r#"  <defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="4" refY="4" orient="auto"><path d="M0,0 L8,4 L0,8 z" fill="black"/></marker></defs>"#
    );
    let _ = writeln!(s, r#"  <g id="levels" stroke="black" stroke-width="1.5">"#);
    for &nu in &levels {
        let e = energy(nu);
        let _ = writeln!(
            s,
            r#"    <line class="level" data-nu="{nu}" data-energy="{e}" x1="{LEFT}" y1="{yy}" x2="{RIGHT}" y2="{yy}"/>"#,
            yy = y(e)
        );
    }
    let _ = writeln!(s, "  </g>");
    let _ = writeln!(
        s,
        r#"  <g id="labels" font-family="serif" font-size="12" text-anchor="end">"#
    );
    for &nu in &levels {
        let e = energy(nu);
        let _ = writeln!(s, r#"    <text x="{}" y="{}">E = {e}</text>"#, LEFT - 8.0, y(e) + 4.0);
    }
    let _ = writeln!(s, "  </g>");
    for (i, chain) in chains.iter().enumerate() {
        let x = col(i);
        let _ = writeln!(
            s,
            r#"  <g class="chain" data-start="{}" stroke="black" stroke-width="1.2">"#,
            chain[0]
        );
        for w in chain.windows(2) {
            let _ = writeln!(
                s,
                r#"    <line class="raise" x1="{x}" y1="{}" x2="{x}" y2="{}" marker-end="url(#arrow)"/>"#,
                y(energy(w[0])) - 2.0,
                y(energy(w[1])) + 6.0
            );
        }
        if let Some(&last) = chain.last() {
            let _ = writeln!(
                s,
                r#"    <line class="continuation" x1="{x}" y1="{}" x2="{x}" y2="{}" stroke-dasharray="4,3"/>"#,
                y(energy(last)) - 2.0,
                y(energy(last + step)) + 6.0
            );
        }
        let _ = writeln!(s, "  </g>");
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_m2() {
        let svg = render_diagram(2, 8).unwrap();
        assert_eq!(svg.matches(r#"class="level""#).count(), 10);
        assert_eq!(svg.matches(r#"class="chain""#).count(), 3);
        assert_eq!(svg.matches(r#"class="continuation""#).count(), 3);
        // -3 -> 0 -> 3 -> 6, 1 -> 4 -> 7, 2 -> 5 -> 8
        assert_eq!(svg.matches(r#"class="raise""#).count(), 7);
        assert!(svg.contains(r#"data-nu="-3" data-energy="0""#));
    }
}
