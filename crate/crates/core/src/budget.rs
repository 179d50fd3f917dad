use serde::{Deserialize, Serialize};

use crate::arith::DEFAULT_RHO_STEPS;

pub const DEFAULT_ORBIT_DIGITS: u64 = 10_000_000;
pub const DEFAULT_SYMBOLIC_DEGREE: u64 = 4096;

/// Resource caps shared by orbit iteration, symbolic composition and factoring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Total decimal digits allowed across one orbit.
    pub orbit_digits: u64,
    /// Largest degree a symbolic iterate may reach.
    pub symbolic_degree: u64,
    /// Pollard rho steps per composite cofactor.
    pub factor_steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            orbit_digits: DEFAULT_ORBIT_DIGITS,
            symbolic_degree: DEFAULT_SYMBOLIC_DEGREE,
            factor_steps: DEFAULT_RHO_STEPS,
        }
    }
}

impl Budget {
    /// Defaults overridden by `ITERGCD_ORBIT_DIGITS`, `ITERGCD_SYMBOLIC_DEGREE`
    /// and `ITERGCD_FACTOR_STEPS` when set to valid integers.
    pub fn from_env() -> Self {
        let read = |key: &str, default: u64| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(default)
        };
        let d = Budget::default();
        Budget {
            orbit_digits: read("ITERGCD_ORBIT_DIGITS", d.orbit_digits),
            symbolic_degree: read("ITERGCD_SYMBOLIC_DEGREE", d.symbolic_degree),
            factor_steps: read("ITERGCD_FACTOR_STEPS", d.factor_steps),
        }
    }
}
