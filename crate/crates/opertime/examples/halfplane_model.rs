//! The disc-to-half-plane transform: norm preservation with the dx/pi
//! weight, and the intertwining of the semigroup boundary symbol e_t with
//! multiplication by exp(i t x).

use opertime::charfun::halfplane_transform;
use opertime::opcore::grid::GridFunction;
use opertime::opcore::linalg::{c, cr};

fn main() -> opertime::Result<()> {
    let u = GridFunction::circle_from_fn(128, |w| w + cr(0.25) * w * w);
    for half_width in [50.0, 100.0, 200.0] {
        let n_line = (40.0 * half_width) as usize;
        let ht = halfplane_transform(&u, n_line, half_width)?;
        println!(
            "window [-{half_width}, {half_width}]: norm defect {:.3e}, tail bound {:.3e}",
            ht.norm_defect, ht.tail_bound
        );
    }

    // e_t(omega) pulls back to exp(i t x) under the Cayley map
    let t = 0.7;
    let et_u = GridFunction::circle_from_fn(128, |w| {
        ((w + cr(1.0)) / (w - cr(1.0)) * cr(t)).exp() * (w + cr(0.25) * w * w)
    });
    let f = halfplane_transform(&u, 1024, 30.0)?;
    let g = halfplane_transform(&et_u, 1024, 30.0)?;
    let mut worst = 0.0f64;
    for j in 128..896 {
        let x = f.result.domain.line_point(j);
        let want = c(0.0, t * x).exp() * f.result.samples[(j, 0)];
        worst = worst.max((g.result.samples[(j, 0)] - want).norm());
    }
    println!("e_t vs exp(itx) intertwining on the interior: {worst:.3e}");
    Ok(())
}
