//! Source objects named in a config, one JSON shape per experiment kind:
//!
//! * `schur`: `{"taylor": [[re, im], ...]}`, Taylor data of a finite
//!   Blaschke product; default `(z + 1/2)/(1 + z/2)`.
//! * `phase`, `superres`: a rational inner function `{"p": <poly>, "m": [...]}`,
//!   default `p = 2 - z_1 - z_2`, `m = 0`. `superres` also accepts
//!   `"mix_with"`, a second inner function whose Cayley transform replaces
//!   the constant 1 in the mixtures.
//! * `lambda`: `{"dim": d, "terms": [[[beta...], q], ...]}`, default `Q = t`.
//! * `ball`: a `BallMap` `{"A": ..., "b": ...}`; without one a random
//!   corpus of automorphisms is drawn.
//! * `demo`: no source.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use super::config::{ExperimentConfig, ExperimentKind};
use crate::ballres::BallMap;
use crate::error::{Error, Result};
use crate::multipoly::{CPoly, MultiIndex};
use crate::polydisk::RationalInner;
use crate::semialg::PushforwardPoly;

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Taylor(Vec<Complex64>),
    Inner { rif: RationalInner, mix_with: Option<RationalInner> },
    Sublevel(PushforwardPoly),
    Ball(Option<BallMap>),
    Empty,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TaylorJson {
    taylor: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QJson {
    dim: usize,
    terms: Vec<(Vec<usize>, f64)>,
}

/// `2 - z_1 - z_2`, stable on the closed bidisk except at `(1, 1)`.
pub fn default_inner() -> RationalInner {
    let p = CPoly::from_real_terms(2, &[(&[0, 0], 2.0), (&[1, 0], -1.0), (&[0, 1], -1.0)]).expect("valid terms");
    RationalInner::unchecked(p, MultiIndex::zeros(2)).expect("nonzero constant term")
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn parse(cfg: &ExperimentConfig) -> Result<Source> {
    let src = cfg.source.as_ref();
    match cfg.kind {
        ExperimentKind::Schur => match src {
            None => Ok(Source::Taylor(vec![Complex64::new(0.5, 0.0), Complex64::new(0.75, 0.0)])),
            Some(v) => {
                let t: TaylorJson = serde_json::from_value(v.clone()).map_err(json_err)?;
                if t.taylor.is_empty() {
                    return Err(Error::Format("empty Taylor data".into()));
                }
                Ok(Source::Taylor(t.taylor.iter().map(|p| Complex64::new(p[0], p[1])).collect()))
            }
        },
        ExperimentKind::Phase | ExperimentKind::Superres => match src {
            None => Ok(Source::Inner { rif: default_inner(), mix_with: None }),
            Some(v) => {
                let mut v = v.clone();
                let mix = match v.as_object_mut().and_then(|o| o.remove("mix_with")) {
                    Some(m) if cfg.kind == ExperimentKind::Superres => {
                        Some(serde_json::from_value::<RationalInner>(m).map_err(json_err)?)
                    }
                    Some(_) => return Err(Error::Format("mix_with is only used by superres".into())),
                    None => None,
                };
                let rif: RationalInner = serde_json::from_value(v).map_err(json_err)?;
                if let Some(m) = &mix {
                    if m.dim() != rif.dim() {
                        return Err(Error::DimensionMismatch { expected: rif.dim(), got: m.dim() });
                    }
                }
                Ok(Source::Inner { rif, mix_with: mix })
            }
        },
        ExperimentKind::Lambda => {
            let q = match src {
                None => PushforwardPoly::from_terms(1, &[(&[1], 1.0)])?,
                Some(v) => {
                    let q: QJson = serde_json::from_value(v.clone()).map_err(json_err)?;
                    let terms: Vec<(&[usize], f64)> = q.terms.iter().map(|(a, c)| (a.as_slice(), *c)).collect();
                    PushforwardPoly::from_terms(q.dim, &terms)?
                }
            };
            Ok(Source::Sublevel(q))
        }
        ExperimentKind::Ball => match src {
            None => Ok(Source::Ball(None)),
            Some(v) => Ok(Source::Ball(Some(serde_json::from_value(v.clone()).map_err(json_err)?))),
        },
        ExperimentKind::Demo => match src {
            None | Some(Value::Null) => Ok(Source::Empty),
            Some(_) => Err(Error::Format("demo takes no source".into())),
        },
    }
}

pub fn check(cfg: &ExperimentConfig) -> Result<()> {
    parse(cfg).map(|_| ())
}
