#![allow(dead_code)]

use omcool_core::model::{CavityMode, CouplingEdge, MechanicalMode, SystemConfig};
use rand::rngs::StdRng;
use rand::Rng;

/// Random effective-mode system with at most `max_modes` modes.
///
/// Rates are kept away from zero so the slowest decay, and with it the
/// integration horizon, stays moderate.
pub fn random_system(rng: &mut StdRng, max_modes: usize) -> SystemConfig {
    let c = rng.random_range(1..=3.min(max_modes - 1));
    let m = rng.random_range(1..=(max_modes - c));
    let cavities = (0..c)
        .map(|_| CavityMode::new(rng.random_range(0.3..1.5), rng.random_range(0.05..0.5)))
        .collect();
    let mechanicals = (0..m)
        .map(|_| {
            MechanicalMode::new(
                rng.random_range(0.7..1.3),
                rng.random_range(0.01..0.1),
                rng.random_range(0.0..50.0),
            )
        })
        .collect();
    let mut cfg = SystemConfig::new(cavities, mechanicals);
    for j in 0..c {
        for l in 0..m {
            if rng.random_bool(0.6) {
                let s = rng.random_range(0.01..0.12);
                cfg = cfg.with_edge(CouplingEdge::optomechanical(j, l, s));
            }
        }
    }
    for a in 0..c {
        for b in a + 1..c {
            if rng.random_bool(0.4) {
                let s = rng.random_range(-0.1..0.1);
                cfg = cfg.with_edge(CouplingEdge::photon_hop(a, b, s));
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            if rng.random_bool(0.4) {
                let s = rng.random_range(-0.08..0.08);
                cfg = cfg.with_edge(CouplingEdge::phonon_hop(a, b, s));
            }
        }
    }
    cfg.validate().expect("generated system is valid")
}
