use minlab::*;
use minlab::catalog::*;
use minlab::wdata::OmegaConvention;
fn main() {
    let g = GridDomain::square(-0.6f64, 0.6, 65).unwrap();
    let imm = cylinder::<f64>(std::f64::consts::PI, 0.0).sample_immersion(g).unwrap();
    let rebuilt = Immersion::from_weierstrass(imm.manifold, imm.h.clone(), OmegaConvention::default()).unwrap();
    let hc = rebuilt.height_compat_residual();
    let mut worst = 0.0; let mut at = 0;
    for k in 0..g.len() { if hc.values[k] > worst { worst = hc.values[k]; at = k; } }
    println!("height compat {worst:.3e} at (i={}, j={})", at%65, at/65);
    // compare f fields
    let mut fd = 0.0f64;
    for k in 0..g.len() { fd = fd.max((rebuilt.f.values[k].abs() - imm.f.values[k].abs()).abs()); }
    println!("f vs v: {fd:.3e}");
}
