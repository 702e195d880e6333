use std::path::Path;

use super::{bell_state, phased_max_entangled, singlet, BellKind, BipartiteState};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub const REGISTRY_HELP: &str = "bell:phi+|phi-|psi+|psi-, phased:d=<d>[:<phase>,...], \
werner:beta=<b> (noisy singlet), mixed:d1=<d1>,d2=<d2>, product:d1=<d1>,d2=<d2>";

/// Looks up a registry name such as `bell:psi-`, `phased:d=3:0,0,0` or
/// `werner:beta=0.5`.
pub fn named_state(name: &str) -> Result<BipartiteState> {
    let unknown = || Error::Unknown {
        kind: "state",
        name: name.to_string(),
    };
    let (family, rest) = name.split_once(':').ok_or_else(unknown)?;
    match family {
        "bell" => {
            let kind = BellKind::ALL
                .into_iter()
                .find(|k| k.name() == rest)
                .ok_or_else(unknown)?;
            Ok(bell_state(kind))
        }
        "phased" => {
            let (dpart, phases) = match rest.split_once(':') {
                Some((d, p)) => (d, Some(p)),
                None => (rest, None),
            };
            let d: usize = parse_kv(dpart, "d")?;
            let phases = match phases {
                Some(p) => parse_list(p)?,
                None => vec![0.0; d],
            };
            phased_max_entangled(d, &phases)
        }
        "werner" => {
            let beta: f64 = parse_kv(rest, "beta")?;
            singlet().mix_with_white_noise(beta)
        }
        "mixed" | "product" => {
            let (a, b) = rest.split_once(',').ok_or_else(unknown)?;
            let d1: usize = parse_kv(a, "d1")?;
            let d2: usize = parse_kv(b, "d2")?;
            if family == "mixed" {
                BipartiteState::maximally_mixed(d1, d2)
            } else {
                let e1 = |d: usize| {
                    let mut v = vec![0.0; d];
                    v[0] = 1.0;
                    ComplexMatrix::from_real_diagonal(&v)
                };
                BipartiteState::product(&e1(d1), &e1(d2))
            }
        }
        _ => Err(unknown()),
    }
}

/// Registry name if it parses as one, otherwise a path to a JSON state file.
pub fn resolve_state(arg: &str) -> Result<BipartiteState> {
    let is_registry = ["bell:", "phased:", "werner:", "mixed:", "product:"]
        .iter()
        .any(|p| arg.starts_with(p));
    if is_registry || (arg.contains(':') && !Path::new(arg).exists()) {
        named_state(arg)
    } else {
        BipartiteState::load(arg)
    }
}

fn parse_kv<T: std::str::FromStr>(text: &str, key: &str) -> Result<T> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("expected {key}=<value>, got '{text}'")))?;
    if k.trim() != key {
        return Err(Error::Parse(format!("expected key '{key}', got '{k}'")));
    }
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse value '{v}' for {key}")))
}

pub(crate) fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("cannot parse number '{s}'")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names() {
        assert_eq!(named_state("bell:psi-").unwrap(), singlet());
        let p = named_state("phased:d=3").unwrap();
        assert_eq!(p, phased_max_entangled(3, &[0.0; 3]).unwrap());
        let p = named_state("phased:d=2:0,3.141592653589793").unwrap();
        assert_eq!(p.d1(), 2);
        let w = named_state("werner:beta=0.5").unwrap();
        assert_eq!(w, singlet().mix_with_white_noise(0.5).unwrap());
        assert_eq!(named_state("mixed:d1=2,d2=3").unwrap().dim(), 6);
        assert!((named_state("product:d1=2,d2=2").unwrap().purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn registry_errors() {
        assert!(matches!(
            named_state("bell:chi"),
            Err(Error::Unknown { .. })
        ));
        assert!(named_state("phased:d=3:0,0").is_err());
        assert!(named_state("werner:beta=2").is_err());
        assert!(named_state("nope").is_err());
        assert!(resolve_state("nosuchfile.json").is_err());
    }
}
