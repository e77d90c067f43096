//! Forced radial equation `r_tt = (κ + ½ sin t) r` between the constant
//! forcings `c = ±½`.

use himcf::radial::{forced_radial, RadialGeometry};

fn main() -> himcf::Result<()> {
    let forcing = |t: f64| 0.5 * t.sin();
    for g in [RadialGeometry::Circle, RadialGeometry::sphere(2)?, RadialGeometry::Cylinder] {
        let rep = forced_radial(g, &forcing, -0.5, 0.5, 1.0, 0.0, 1e-3, 4.0)?;
        println!("{g:?}: margins {:.3e} / {:.3e} (tolerance {:.1e})", rep.margin_lower, rep.margin_upper, rep.tolerance);
        for k in (0..rep.times.len()).step_by(1000) {
            println!(
                "  t = {:.1}  {:.6} <= {:.6} <= {:.6}",
                rep.times[k], rep.r_lower[k], rep.r[k], rep.r_upper[k]
            );
        }
    }
    Ok(())
}
