//! Instance files.
//!
//! ```json
//! {
//!   "n": 2, "d": 3, "e": 1,
//!   "field": "Q",
//!   "variant": "PlusFNuG",
//!   "coefficients": { "generic": { "seed": 1 } }
//! }
//! ```
//!
//! Explicit coefficients list one record per term, `[exponents, num, den]`
//! or `[exponents, re_num, re_den, im_num, im_den]`:
//!
//! ```json
//! "coefficients": { "explicit": { "F": [[[3,0,0], "1", "1"]], "G": [[[1,0,0], "1", "1"]] } }
//! ```

use std::path::Path;

use logjac::polys::TermRecord;
use logjac::{Field, FieldKind, GaussianRationals, GeneratorVariant, Poly, PrimeField, Rationals, RingInstance};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficients {
    Explicit {
        #[serde(rename = "F")]
        f: Vec<TermRecord>,
        #[serde(rename = "G")]
        g: Vec<TermRecord>,
    },
    Generic {
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    pub field: FieldKind,
    #[serde(default)]
    pub variant: GeneratorVariant,
    pub coefficients: Coefficients,
    /// Not part of the cache hash: it bounds work but never changes a result.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<u32>,
}

impl InstanceSpec {
    pub fn generic(n: usize, d: u32, e: u32, seed: u64) -> Self {
        InstanceSpec {
            n,
            d: Some(d),
            e: Some(e),
            field: FieldKind::Q,
            variant: GeneratorVariant::default(),
            coefficients: Coefficients::Generic { seed },
            degree_cap: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            let msg = e.to_string();
            let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
            CliError::Usage(format!("{}:{}:{}: {msg}", path.display(), e.line(), e.column()))
        })
    }

    /// SHA-256 over `(n, d, e, field, variant, coefficients)`.
    pub fn content_hash(&self) -> String {
        let keyed = InstanceSpec { degree_cap: None, ..self.clone() };
        let bytes = serde_json::to_vec(&keyed).expect("instance spec serializes");
        Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn build(&self) -> Result<AnyInstance, CliError> {
        Ok(match self.field {
            FieldKind::Q => AnyInstance::Q(self.build_in(Rationals)?),
            FieldKind::Qi => AnyInstance::Qi(self.build_in(GaussianRationals)?),
            FieldKind::Fp(p) => AnyInstance::Fp(self.build_in(PrimeField::new(p).map_err(logjac::Error::from)?)?),
        })
    }

    fn build_in<F: Field>(&self, field: F) -> Result<RingInstance<F>, CliError> {
        let inst = match &self.coefficients {
            Coefficients::Generic { seed } => {
                let (d, e) = self
                    .d
                    .zip(self.e)
                    .ok_or_else(|| CliError::Usage("generic coefficients need both `d` and `e`".into()))?;
                RingInstance::generic(field, self.n, d, e, self.variant, *seed)?
            }
            Coefficients::Explicit { f, g } => {
                let f = Poly::from_records(field.clone(), self.n + 1, f)?;
                let g = Poly::from_records(field.clone(), self.n + 1, g)?;
                let inst = RingInstance::new(field, self.n, f, g, self.variant)?;
                for (name, given, actual) in [("d", self.d, inst.d()), ("e", self.e, inst.e())] {
                    if given.is_some_and(|v| v != actual) {
                        return Err(CliError::Usage(format!(
                            "field `{name}`: declared {}, coefficients have degree {actual}",
                            given.unwrap()
                        )));
                    }
                }
                inst
            }
        };
        Ok(match self.degree_cap {
            Some(cap) => inst.with_degree_cap(cap),
            None => inst,
        })
    }
}

/// A ring instance over whichever field the spec names.
pub enum AnyInstance {
    Q(RingInstance<Rationals>),
    Qi(RingInstance<GaussianRationals>),
    Fp(RingInstance<PrimeField>),
}

/// Runs `$body` with `$inst` bound to the concrete instance.
#[macro_export]
macro_rules! dispatch {
    ($any:expr, $inst:ident => $body:expr) => {
        match $any {
            $crate::instance::AnyInstance::Q($inst) => $body,
            $crate::instance::AnyInstance::Qi($inst) => $body,
            $crate::instance::AnyInstance::Fp($inst) => $body,
        }
    };
}
