//! The scattering-style chain on the shift model: an outgoing subspace,
//! the Sinai translation representation it induces, and the spectral
//! representation obtained by Fourier transform.

use opertime::opcore::operator::OperatorRep;
use opertime::opcore::subspace::SubspaceBasis;
use opertime::timeop::{
    sinai_translation_representation, spectral_representation, verify_outgoing,
};

fn main() -> opertime::Result<()> {
    let n = 128usize;
    let u = OperatorRep::CyclicShift {
        blocks: n,
        block_size: 1,
        power: -1,
    };
    let mp = SubspaceBasis::coordinate_span(n, &(n / 2..n).collect::<Vec<_>>());

    let outgoing = verify_outgoing(&mp, &u, n / 2, 1)?;
    println!(
        "outgoing: invariant = {} (residual {:.3e}), intersection dim {}, union codim {}",
        outgoing.invariant,
        outgoing.invariance_residual,
        outgoing.intersection_dim,
        outgoing.union_codim
    );

    let trans = sinai_translation_representation(&u, &mp, n / 2, 1)?;
    println!(
        "translation representation: fiber dim {}, conjugation residual {:.3e}, M+ alignment {:.3e}",
        trans.fiber_dim, trans.conjugation_residual, trans.mplus_alignment
    );

    let spec = spectral_representation(&trans, &u, &mp)?;
    println!(
        "spectral representation: evolution {:.3e}, derivative {:.3e}, Paley-Wiener {:.3e}, round trip {:.3e}",
        spec.evolution_residual,
        spec.derivative_residual,
        spec.paley_wiener_residual,
        spec.roundtrip_residual
    );
    Ok(())
}
