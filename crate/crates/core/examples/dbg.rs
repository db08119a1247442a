use lspsim::greens::*;
use lspsim::drude::DrudeMaterial;

fn main() {
    let sys = SphereSystem::new(8.0, DrudeMaterial::silver(), 1.0).unwrap();
    let geom = EmitterGeometry::new(10.0).unwrap();
    let e = 2.92;
    let k = sys.background_wavenumber(e);
    println!("k = {k}");
    // free column at (1um, pi/2)
    let det = Detector { r_nm: 1000.0, theta_rad: std::f64::consts::FRAC_PI_2 };
    let free = free_field_column(&geom, &det, k);
    println!("free = {free:?}");
    let col = far_field_green_column(&sys, &geom, &det, e, 25).unwrap();
    println!("total = {col:?}");
    // b_n values
    for n in [1u32, 2, 3] {
        println!("b_{n} = {:?}", mie_coefficient_b(&sys, n, e).unwrap());
    }
    println!("rad rate series = {:?}", radiative_rate_series(&sys, &geom, e, 25));
    // power integral at r=1e4
    for &r in &[1.0e4f64] {
        let n = 720;
        let mut acc = 0.0;
        let mut prev: Option<f64> = None;
        for i in 0..=n {
            let th = std::f64::consts::PI * i as f64 / n as f64;
            let c = far_field_green_column(&sys, &geom, &Detector { r_nm: r, theta_rad: th }, e, 25).unwrap();
            let v = (c[0].norm_sqr() + c[1].norm_sqr()) * th.sin();
            if i == 0 || i == 180 || i == 360 || i == 540 || i == 720 {
                println!("theta={th:.3}: col=({:.3e},{:.3e}) v={v:.3e}", c[0].norm(), c[1].norm());
            }
            if let Some(p) = prev { acc += 0.5*(p+v)*std::f64::consts::PI/n as f64; }
            prev = Some(v);
        }
        let power = 2.0*std::f64::consts::PI*r*r*acc;
        let p_free = k.powi(4)/(6.0*std::f64::consts::PI);
        println!("r={r}: power={power:.6e} p_free={p_free:.6e} ratio={}", power/p_free);
    }
}
