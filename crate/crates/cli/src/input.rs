//! State files and `family:` descriptors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use concbound::states::{
    bell_state, ghz_noise, ghz_state, horodecki_state, w_noise, w_state, werner, white_noise_mix,
};
use concbound::{CMatrix, DensityMatrix, PureState, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// On-disk state: a density matrix (`re`/`im` are row-major nested arrays) or
/// a pure state (`re`/`im` are flat amplitude arrays).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateFile {
    Mixed {
        dims: Vec<usize>,
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    },
    Pure {
        dims: Vec<usize>,
        re: Vec<f64>,
        im: Vec<f64>,
    },
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let n = m.rows();
        let rows = |f: fn(C64) -> f64| (0..n).map(|i| (0..n).map(|j| f(m[(i, j)])).collect()).collect();
        Self::Mixed {
            dims: rho.dims().to_vec(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self::Pure {
            dims: psi.dims().to_vec(),
            re: psi.amplitudes().iter().map(|z| z.re).collect(),
            im: psi.amplitudes().iter().map(|z| z.im).collect(),
        }
    }

    /// Validates and converts to a density matrix.
    pub fn into_density(self) -> Result<DensityMatrix, CliError> {
        match self {
            Self::Mixed { dims, re, im } => {
                let n = re.len();
                if im.len() != n || re.iter().chain(&im).any(|row| row.len() != n) {
                    return Err(CliError::Invalid(format!("re/im must both be {n}x{n}")));
                }
                let m = CMatrix::from_fn(n, n, |i, j| C64::new(re[i][j], im[i][j]));
                Ok(DensityMatrix::new(m, dims)?)
            }
            Self::Pure { dims, re, im } => {
                if re.len() != im.len() {
                    return Err(CliError::Invalid("re and im lengths differ".into()));
                }
                let amps = re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect();
                Ok(PureState::new(amps, dims)?.projector())
            }
        }
    }
}

pub fn read_state_file(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("cannot parse {}: {e}", path.display())))?;
    file.into_density()
}

/// Named state families, each parametrised by a noise weight `p` where relevant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Family {
    GhzNoise { p: f64 },
    WNoise { p: f64 },
    Horodecki { a: f64, p: f64 },
    Werner { p: f64 },
    Bell,
    Ghz,
    W,
    MaximallyMixed { dims: Dims },
}

/// Local dimensions, written `3x3` or `2x2x2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub local: usize,
    pub parties: usize,
}

impl Dims {
    pub fn to_vec(self) -> Vec<usize> {
        vec![self.local; self.parties]
    }
}

impl Family {
    /// Same family with its noise parameter replaced.
    pub fn with_p(self, p: f64) -> Result<Self, CliError> {
        Ok(match self {
            Self::GhzNoise { .. } => Self::GhzNoise { p },
            Self::WNoise { .. } => Self::WNoise { p },
            Self::Horodecki { a, .. } => Self::Horodecki { a, p },
            Self::Werner { .. } => Self::Werner { p },
            other => {
                return Err(CliError::Invalid(format!("family {other} has no noise parameter p")))
            }
        })
    }

    pub fn build(self) -> Result<DensityMatrix, CliError> {
        Ok(match self {
            Self::GhzNoise { p } => ghz_noise(p)?,
            Self::WNoise { p } => w_noise(p)?,
            Self::Horodecki { a, p } => white_noise_mix(&horodecki_state(a)?, p)?,
            Self::Werner { p } => werner(p)?,
            Self::Bell => bell_state().projector(),
            Self::Ghz => ghz_state().projector(),
            Self::W => w_state().projector(),
            Self::MaximallyMixed { dims } => DensityMatrix::maximally_mixed(dims.to_vec())?,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GhzNoise { p } => write!(f, "ghz-noise,p={p}"),
            Self::WNoise { p } => write!(f, "w-noise,p={p}"),
            Self::Horodecki { a, p } => write!(f, "horodecki,a={a},p={p}"),
            Self::Werner { p } => write!(f, "werner,p={p}"),
            Self::Bell => f.write_str("bell"),
            Self::Ghz => f.write_str("ghz"),
            Self::W => f.write_str("w"),
            Self::MaximallyMixed { dims } => write!(
                f,
                "maximally-mixed,dims={}",
                dims.to_vec().iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x")
            ),
        }
    }
}

fn parse_dims(text: &str) -> Result<Dims, CliError> {
    let parts: Vec<usize> = text
        .split('x')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Invalid(format!("bad dims {text:?}, expected e.g. 3x3")))?;
    let local = parts[0];
    if parts.len() < 2 || parts.iter().any(|&d| d != local) {
        return Err(CliError::Invalid(format!(
            "dims {text:?}: need at least two equal local dimensions"
        )));
    }
    Ok(Dims {
        local,
        parties: parts.len(),
    })
}

/// Factor a total dimension `d` into `parties` equal local dimensions.
fn split_total(d: usize, parties: usize) -> Result<Dims, CliError> {
    let local = (d as f64).powf(1.0 / parties as f64).round() as usize;
    if local < 2 || local.pow(parties as u32) != d {
        return Err(CliError::Invalid(format!(
            "d = {d} is not a {parties}-th power of a local dimension >= 2"
        )));
    }
    Ok(Dims { local, parties })
}

impl FromStr for Family {
    type Err = CliError;

    /// Accepts `name,key=value,...` and also `name:key=value,...`.
    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim().strip_prefix("family:").unwrap_or(s.trim());
        let mut pieces = s.split([',', ':']);
        let name = pieces.next().unwrap_or("").trim().to_ascii_lowercase();
        let mut params: BTreeMap<String, String> = BTreeMap::new();
        for piece in pieces.filter(|p| !p.trim().is_empty()) {
            let (k, v) = piece
                .split_once('=')
                .ok_or_else(|| CliError::Invalid(format!("expected key=value, got {piece:?}")))?;
            params.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        let mut take = |key: &str| params.remove(key);
        let num = |key: &str, v: Option<String>, default: Option<f64>| -> Result<f64, CliError> {
            match v {
                Some(text) => text
                    .parse::<f64>()
                    .map_err(|_| CliError::Invalid(format!("{key}={text} is not a number"))),
                None => default.ok_or_else(|| CliError::Invalid(format!("family {name} needs {key}="))),
            }
        };
        let family = match name.as_str() {
            "ghz-noise" => Self::GhzNoise { p: num("p", take("p"), Some(1.0))? },
            "w-noise" => Self::WNoise { p: num("p", take("p"), Some(1.0))? },
            "horodecki" => Self::Horodecki {
                a: num("a", take("a"), None)?,
                p: num("p", take("p"), Some(1.0))?,
            },
            "werner" => Self::Werner { p: num("p", take("p"), Some(1.0))? },
            "bell" => Self::Bell,
            "ghz" => Self::Ghz,
            "w" => Self::W,
            "maximally-mixed" => {
                let parties = match take("parties") {
                    Some(t) => t
                        .parse::<usize>()
                        .map_err(|_| CliError::Invalid(format!("parties={t} is not an integer")))?,
                    None => 2,
                };
                let dims = match (take("dims"), take("d")) {
                    (Some(d), None) => parse_dims(&d)?,
                    (None, Some(d)) => {
                        let total = d
                            .parse::<usize>()
                            .map_err(|_| CliError::Invalid(format!("d={d} is not an integer")))?;
                        split_total(total, parties)?
                    }
                    _ => {
                        return Err(CliError::Invalid(
                            "maximally-mixed needs exactly one of d= or dims=".into(),
                        ))
                    }
                };
                Self::MaximallyMixed { dims }
            }
            other => return Err(CliError::Invalid(format!("unknown family {other:?}"))),
        };
        if let Some(extra) = params.keys().next() {
            return Err(CliError::Invalid(format!("unexpected parameter {extra:?} for {name}")));
        }
        Ok(family)
    }
}

/// Where a state came from: a file path or a family descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSource {
    File(String),
    Family(Family),
}

impl StateSource {
    pub fn parse(arg: &str) -> Result<Self, CliError> {
        if arg.trim_start().starts_with("family:") {
            Ok(Self::Family(arg.parse()?))
        } else {
            Ok(Self::File(arg.to_string()))
        }
    }

    pub fn load(&self) -> Result<DensityMatrix, CliError> {
        match self {
            Self::File(path) => read_state_file(Path::new(path)),
            Self::Family(f) => f.build(),
        }
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            Self::Family(f) => Some(*f),
            Self::File(_) => None,
        }
    }
}

impl fmt::Display for StateSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::File(p) => f.write_str(p),
            Self::Family(fam) => write!(f, "family:{fam}"),
        }
    }
}
