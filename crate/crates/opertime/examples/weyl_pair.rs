//! The finite Weyl pair: clock and shift matrices satisfying
//! shift . clock = omega clock . shift exactly, and the exponentiated
//! commutation relation at the compatible discrete parameters.

use opertime::opcore::operator::OperatorRep;
use opertime::timeop::{check_weyl_relation, finite_weyl_pair, finite_weyl_residual};
use std::f64::consts::PI;

fn main() -> opertime::Result<()> {
    for n in [2usize, 8, 64, 1024] {
        let (clock, shift) = finite_weyl_pair(n);
        let residual = finite_weyl_residual(&clock, &shift)?;
        println!("n = {n:5}: shift.clock - omega clock.shift residual = {residual:.3e}");
    }

    // exponentiated form: U_a = shift^a, V_b = clock^b with s_b = 2 pi b / n
    let n = 16usize;
    let (clock, shift) = finite_weyl_pair(n);
    let u_family = |t: f64| -> opertime::Result<OperatorRep> {
        let mut m = OperatorRep::identity(n);
        for _ in 0..t.round() as usize {
            m = OperatorRep::Compose(vec![shift.clone(), m]);
        }
        Ok(OperatorRep::dense(m.to_dense()?))
    };
    let v_family = |s: f64| -> opertime::Result<OperatorRep> {
        let b = (s * n as f64 / (2.0 * PI)).round() as usize;
        let mut m = OperatorRep::identity(n);
        for _ in 0..b {
            m = OperatorRep::Compose(vec![clock.clone(), m]);
        }
        Ok(OperatorRep::dense(m.to_dense()?))
    };
    let step = 2.0 * PI / n as f64;
    let report = check_weyl_relation(
        &u_family,
        &v_family,
        &[0.0, 1.0, 3.0],
        &[0.0, step, 5.0 * step],
        1e-11,
    )?;
    println!(
        "exponentiated Weyl relation at n = {n}: max residual {:.3e} (verdict: {})",
        report.max_residual,
        if report.verdict { "pass" } else { "fail" }
    );
    Ok(())
}
