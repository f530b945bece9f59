use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum GenMode {
    RandomFree { n: usize, patterns: Vec<String>, density: f64 },
    /// `w_sizes[i][k]` vertices of `W_(i+1)` in part `k`; `u_sizes[i]` copies around triangle `i`.
    Basic { p: usize, w_sizes: Vec<[usize; 3]>, u_sizes: Vec<usize>, w_density: f64 },
    TenSet { v_sizes: [usize; 5], w_sizes: [usize; 5], density: f64 },
    TotallyKDecomposable { k: usize, n: usize },
}

impl GenMode {
    pub fn name(&self) -> &'static str {
        match self {
            GenMode::RandomFree { .. } => "random-free",
            GenMode::Basic { .. } => "basic",
            GenMode::TenSet { .. } => "ten-set",
            GenMode::TotallyKDecomposable { .. } => "totally-k-decomposable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub seed: u64,
    pub stream: u64,
    pub mode: GenMode,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecParseError {
    #[error("line {0}: expected key=value")]
    Syntax(usize),
    #[error("unknown key `{0}` for this mode")]
    UnknownKey(String),
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error("bad value for `{key}`: {value}")]
    Value { key: String, value: String },
    #[error("unknown mode `{0}`")]
    Mode(String),
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl GenSpec {
    pub fn rng(&self) -> ChaCha8Rng {
        super::rng_for(self.seed, self.stream)
    }

    /// Vertex count of the output.
    pub fn n(&self) -> usize {
        match &self.mode {
            GenMode::RandomFree { n, .. } | GenMode::TotallyKDecomposable { n, .. } => *n,
            GenMode::Basic { p, w_sizes, u_sizes, .. } => {
                3 * p + w_sizes.iter().flatten().sum::<usize>() + u_sizes.iter().sum::<usize>()
            }
            GenMode::TenSet { v_sizes, w_sizes, .. } => v_sizes.iter().chain(w_sizes).sum(),
        }
    }

    pub fn with_stream(&self, stream: u64) -> GenSpec {
        GenSpec { stream, ..self.clone() }
    }

    /// One `key=value` per line, keys in a fixed order.
    pub fn to_text(&self) -> String {
        let mut out = format!("mode={}\nseed={}\nstream={}\n", self.mode.name(), self.seed, self.stream);
        match &self.mode {
            GenMode::RandomFree { n, patterns, density } => {
                let _ = write!(out, "n={n}\npatterns={}\ndensity={density}\n", patterns.join(","));
            }
            GenMode::Basic { p, w_sizes, u_sizes, w_density } => {
                let w: Vec<String> = w_sizes.iter().map(|s| format!("{}/{}/{}", s[0], s[1], s[2])).collect();
                let _ = write!(out, "p={p}\nw_sizes={}\nu_sizes={}\nw_density={w_density}\n", w.join(","), join(u_sizes));
            }
            GenMode::TenSet { v_sizes, w_sizes, density } => {
                let _ = write!(out, "v_sizes={}\nw_sizes={}\ndensity={density}\n", join(v_sizes), join(w_sizes));
            }
            GenMode::TotallyKDecomposable { k, n } => {
                let _ = write!(out, "k={k}\nn={n}\n");
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<GenSpec, SpecParseError> {
        let mut kv = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(SpecParseError::Syntax(i + 1))?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        GenSpec::from_pairs(kv)
    }

    /// Builds a spec from already-split keys; shared by the text format and CLI flags.
    pub fn from_pairs(mut kv: BTreeMap<String, String>) -> Result<GenSpec, SpecParseError> {
        let mode = kv.remove("mode").ok_or(SpecParseError::Missing("mode"))?;
        let seed = take_or(&mut kv, "seed", 0u64)?;
        let stream = take_or(&mut kv, "stream", 0u64)?;
        let mode = match mode.as_str() {
            "random-free" => GenMode::RandomFree {
                n: take(&mut kv, "n")?,
                patterns: kv
                    .remove("patterns")
                    .map(|s| s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect())
                    .unwrap_or_default(),
                density: take_or(&mut kv, "density", 0.5)?,
            },
            "basic" => {
                let p: usize = take(&mut kv, "p")?;
                let w_sizes = match kv.remove("w_sizes") {
                    None => vec![[0; 3]; p],
                    Some(s) => s.split(',').map(|t| triple(&s, t)).collect::<Result<_, _>>()?,
                };
                let u_sizes = match kv.remove("u_sizes") {
                    None => vec![0; p],
                    Some(s) => list(&s, "u_sizes")?,
                };
                GenMode::Basic { p, w_sizes, u_sizes, w_density: take_or(&mut kv, "w_density", 0.5)? }
            }
            "ten-set" => GenMode::TenSet {
                v_sizes: five(&mut kv, "v_sizes")?,
                w_sizes: five(&mut kv, "w_sizes")?,
                density: take_or(&mut kv, "density", 0.5)?,
            },
            "totally-k-decomposable" => GenMode::TotallyKDecomposable { k: take(&mut kv, "k")?, n: take(&mut kv, "n")? },
            other => return Err(SpecParseError::Mode(other.to_string())),
        };
        if let Some(k) = kv.into_keys().next() {
            return Err(SpecParseError::UnknownKey(k));
        }
        Ok(GenSpec { seed, stream, mode })
    }
}

fn bad(key: &str, value: &str) -> SpecParseError {
    SpecParseError::Value { key: key.to_string(), value: value.to_string() }
}

fn take<T: std::str::FromStr>(kv: &mut BTreeMap<String, String>, key: &'static str) -> Result<T, SpecParseError> {
    let v = kv.remove(key).ok_or(SpecParseError::Missing(key))?;
    v.parse().map_err(|_| bad(key, &v))
}

fn take_or<T: std::str::FromStr>(kv: &mut BTreeMap<String, String>, key: &'static str, default: T) -> Result<T, SpecParseError> {
    match kv.remove(key) {
        None => Ok(default),
        Some(v) => v.parse().map_err(|_| bad(key, &v)),
    }
}

fn list(s: &str, key: &str) -> Result<Vec<usize>, SpecParseError> {
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad(key, s))).collect()
}

fn triple(all: &str, t: &str) -> Result<[usize; 3], SpecParseError> {
    let xs: Vec<usize> = t.split('/').map(|x| x.trim().parse().map_err(|_| bad("w_sizes", all))).collect::<Result<_, _>>()?;
    xs.try_into().map_err(|_| bad("w_sizes", all))
}

fn five(kv: &mut BTreeMap<String, String>, key: &'static str) -> Result<[usize; 5], SpecParseError> {
    let s = kv.remove(key).ok_or(SpecParseError::Missing(key))?;
    list(&s, key)?.try_into().map_err(|_| bad(key, &s))
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let specs = [
            GenSpec { seed: 3, stream: 1, mode: GenMode::RandomFree { n: 9, patterns: vec!["K3".into(), "P1+2P2".into()], density: 0.25 } },
            GenSpec { seed: 0, stream: 0, mode: GenMode::Basic { p: 2, w_sizes: vec![[1, 0, 2], [0, 0, 0]], u_sizes: vec![0, 1], w_density: 0.5 } },
            GenSpec { seed: 9, stream: 4, mode: GenMode::TenSet { v_sizes: [1, 0, 2, 0, 0], w_sizes: [2; 5], density: 0.75 } },
            GenSpec { seed: 1, stream: 0, mode: GenMode::TotallyKDecomposable { k: 3, n: 30 } },
        ];
        for s in specs {
            assert_eq!(GenSpec::parse(&s.to_text()).unwrap(), s);
        }
    }

    #[test]
    fn rejects_unknown_keys() {
        assert_eq!(GenSpec::parse("mode=totally-k-decomposable\nk=2\nn=3\nextra=1"), Err(SpecParseError::UnknownKey("extra".into())));
        assert_eq!(GenSpec::parse("mode=basic"), Err(SpecParseError::Missing("p")));
        assert!(matches!(GenSpec::parse("seed"), Err(SpecParseError::Syntax(1))));
    }

    #[test]
    fn sizes() {
        let s = GenSpec::parse("mode=basic\np=2\nw_sizes=1/0/2,0/1/0\nu_sizes=1,0").unwrap();
        assert_eq!(s.n(), 6 + 4 + 1);
    }
}
