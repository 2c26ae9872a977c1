//! Resource caps for the exhaustive routines.
//!
//! Defaults can be overridden through `HYPERTILE_CAPS`, a comma-separated
//! list of `name=value` pairs (e.g. `oracle=48,clique=20`). Raising a cap can
//! make a run take exponential time; nothing else guards against that.

use crate::error::{Error, Result};

pub const CAPS_ENV: &str = "HYPERTILE_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Caps {
    /// Host order accepted by the exact factor oracle.
    pub oracle: usize,
    /// Size of the set searched by the largest-clique routine.
    pub clique: usize,
    /// Host order accepted by the local search.
    pub local_search: usize,
    /// Number of k-sets the design process may materialize.
    pub design: usize,
    /// Largest order for which the independence number is exact.
    pub independence: usize,
    /// Number of candidate sets a closeness or absorber count may examine.
    pub candidates: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            oracle: 40,
            clique: 16,
            local_search: 64,
            design: 10_000_000,
            independence: 40,
            candidates: 5_000_000,
        }
    }
}

impl Caps {
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAPS_ENV) {
            Ok(spec) => Self::parse(&spec),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn parse(spec: &str) -> Result<Self> {
        let mut caps = Self::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let bad = || Error::InvalidParameter(format!("bad {CAPS_ENV} entry {item:?}"));
            let (name, value) = item.split_once('=').ok_or_else(bad)?;
            let value: usize = value.trim().parse().map_err(|_| bad())?;
            let slot = match name.trim() {
                "oracle" => &mut caps.oracle,
                "clique" => &mut caps.clique,
                "local_search" => &mut caps.local_search,
                "design" => &mut caps.design,
                "independence" => &mut caps.independence,
                "candidates" => &mut caps.candidates,
                _ => return Err(bad()),
            };
            *slot = value;
        }
        Ok(caps)
    }

    pub(crate) fn check(what: &'static str, value: usize, cap: usize) -> Result<()> {
        if value > cap {
            Err(Error::CapExceeded { what, value, cap })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides() {
        let c = Caps::parse("oracle=48, clique=20").unwrap();
        assert_eq!(c.oracle, 48);
        assert_eq!(c.clique, 20);
        assert_eq!(c.design, Caps::default().design);
        assert!(Caps::parse("bogus=1").is_err());
        assert!(Caps::parse("oracle").is_err());
        assert_eq!(Caps::parse("").unwrap(), Caps::default());
    }
}
