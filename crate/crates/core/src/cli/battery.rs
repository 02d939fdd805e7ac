use std::path::Path;

use crate::bloch::{normalize, random_normalized_polynomials_in, BlochParams, PrenormBudget};
use crate::error::{Error, Result};
use crate::holo::{text, HoloMap};

/// A battery member together with the factor it was scaled by to reach unit prenorm.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedMap {
    pub map: HoloMap,
    pub factor: f64,
}

/// Parses `random:<count>:deg<k>` into `(count, k)`.
pub fn parse_random_spec(spec: &str) -> Option<Result<(usize, u32)>> {
    let rest = spec.strip_prefix("random:")?;
    let bad = || {
        Error::param(
            "battery",
            format!("expected random:<count>:deg<k>, got `{spec}`"),
        )
    };
    let parsed = (|| {
        let (count, degree) = rest.split_once(':').ok_or_else(bad)?;
        let count: usize = count.parse().map_err(|_| bad())?;
        let degree: u32 = degree
            .strip_prefix("deg")
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        if count == 0 || degree == 0 {
            return Err(bad());
        }
        Ok((count, degree))
    })();
    Some(parsed)
}

/// Builds a battery from a generator spec or a map file, normalizing every map
/// in the class of `params`. Map `i` uses seed `seed + i`, as the checkers do.
pub fn load_battery(
    source: &str,
    params: &BlochParams,
    seed: u64,
    budget: &PrenormBudget,
) -> Result<Vec<LoadedMap>> {
    if let Some(spec) = parse_random_spec(source) {
        let (count, degree) = spec?;
        return Ok(
            random_normalized_polynomials_in(params, count, degree, seed, budget)?
                .into_iter()
                .map(|nm| LoadedMap {
                    map: nm.map,
                    factor: nm.factor,
                })
                .collect(),
        );
    }
    let content = std::fs::read_to_string(Path::new(source))
        .map_err(|e| Error::Io(format!("cannot read battery `{source}`: {e}")))?;
    let maps = text::parse_maps(&content)?;
    maps.iter()
        .enumerate()
        .map(|(i, f)| {
            if f.dim() != params.n() {
                return Err(Error::DimensionMismatch {
                    expected: params.n(),
                    got: f.dim(),
                });
            }
            let nm = normalize(f, params, budget, seed.wrapping_add(i as u64))?;
            Ok(LoadedMap {
                map: nm.map,
                factor: nm.factor,
            })
        })
        .collect()
}

/// Reads a map file, or parses `source` itself when no such file exists.
pub fn load_symbol(source: &str) -> Result<HoloMap> {
    let path = Path::new(source);
    if path.is_file() {
        let content = std::fs::read_to_string(path)?;
        text::parse_map(&content)
    } else {
        text::parse_map(source)
    }
}
