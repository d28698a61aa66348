//! Numerical data of a curve configuration and of effective divisors on it.
//!
//! A [`SurfaceConfiguration`] records, for `n` irreducible components, the
//! symmetric matrix of pairwise intersection numbers and the vector of
//! canonical degrees. Validation enforces the integrality constraints that
//! make adjunction arithmetic exact: distinct components meet non-negatively,
//! self-intersection plus canonical degree is even per component, and each
//! component has non-negative genus.
//!
//! A [`Divisor`] is a non-zero vector of non-negative multiplicities over a
//! configuration. Both types are immutable after construction and safe to
//! share across threads.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Candidate configuration data, prior to validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawConfiguration {
    pub name: String,
    pub component_names: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub k: Vec<i64>,
    pub snc_faithful: bool,
}

/// On-disk form of a configuration.
///
/// `intersections` lists `[i, j, v]` for unordered pairs; unlisted pairs
/// default to 0. Self-intersections live on the component records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDocument {
    pub name: String,
    #[serde(default)]
    pub snc_faithful: bool,
    pub components: Vec<ComponentDocument>,
    #[serde(default)]
    pub intersections: Vec<(usize, usize, i64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDocument {
    pub name: String,
    #[serde(rename = "self")]
    pub self_intersection: i64,
    pub k: i64,
}

/// Validated numerical data of a configuration of curves on a surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceConfiguration {
    name: String,
    component_names: Vec<String>,
    matrix: Vec<Vec<i64>>,
    k: Vec<i64>,
    snc_faithful: bool,
}

impl SurfaceConfiguration {
    /// Validate candidate data. Checks run in a fixed order and report the
    /// offending indices: shape, symmetry, off-diagonal sign, adjunction
    /// parity, component genus.
    pub fn validate(raw: RawConfiguration) -> Result<Self> {
        let n = raw.matrix.len();
        if n == 0 {
            return Err(Error::EmptyConfiguration);
        }
        for (row, entries) in raw.matrix.iter().enumerate() {
            if entries.len() != n {
                return Err(Error::MatrixShape { row, len: entries.len(), expected: n });
            }
        }
        if raw.k.len() != n {
            return Err(Error::KShape { len: raw.k.len(), expected: n });
        }
        if raw.component_names.len() != n {
            return Err(Error::NamesShape { len: raw.component_names.len(), expected: n });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if raw.matrix[i][j] != raw.matrix[j][i] {
                    return Err(Error::AsymmetricMatrix {
                        i,
                        j,
                        a: raw.matrix[i][j],
                        b: raw.matrix[j][i],
                    });
                }
                if raw.matrix[i][j] < 0 {
                    return Err(Error::NegativeOffDiagonal { i, j, value: raw.matrix[i][j] });
                }
            }
        }
        for i in 0..n {
            let self_int = raw.matrix[i][i];
            let k = raw.k[i];
            let sum = (self_int as i128) + (k as i128);
            if sum.rem_euclid(2) != 0 {
                return Err(Error::AdjunctionParity { index: i, self_int, k });
            }
            let genus = sum / 2 + 1;
            if genus < 0 {
                let genus = i64::try_from(genus).map_err(|_| Error::Overflow)?;
                return Err(Error::NegativeComponentGenus { index: i, genus });
            }
        }
        Ok(SurfaceConfiguration {
            name: raw.name,
            component_names: raw.component_names,
            matrix: raw.matrix,
            k: raw.k,
            snc_faithful: raw.snc_faithful,
        })
    }

    /// Build and validate from the on-disk document form.
    pub fn from_document(doc: &ConfigDocument) -> Result<Self> {
        let n = doc.components.len();
        let mut matrix = vec![vec![0i64; n]; n];
        let mut seen = vec![vec![false; n]; n];
        for (i, comp) in doc.components.iter().enumerate() {
            matrix[i][i] = comp.self_intersection;
        }
        for &(i, j, v) in &doc.intersections {
            if i >= n || j >= n {
                return Err(Error::IntersectionIndexOutOfRange { i, j, n });
            }
            if i == j {
                return Err(Error::DiagonalIntersectionEntry { i, j });
            }
            if seen[i][j] {
                return Err(Error::DuplicateIntersectionEntry { i, j });
            }
            seen[i][j] = true;
            seen[j][i] = true;
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
        Self::validate(RawConfiguration {
            name: doc.name.clone(),
            component_names: doc.components.iter().map(|c| c.name.clone()).collect(),
            matrix,
            k: doc.components.iter().map(|c| c.k).collect(),
            snc_faithful: doc.snc_faithful,
        })
    }

    /// Parse and validate a configuration from its JSON document form.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: ConfigDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }

    /// Document form; intersections listed for `i < j` with non-zero value.
    pub fn to_document(&self) -> ConfigDocument {
        let n = self.n();
        let mut intersections = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.matrix[i][j] != 0 {
                    intersections.push((i, j, self.matrix[i][j]));
                }
            }
        }
        ConfigDocument {
            name: self.name.clone(),
            snc_faithful: self.snc_faithful,
            components: (0..n)
                .map(|i| ComponentDocument {
                    name: self.component_names[i].clone(),
                    self_intersection: self.matrix[i][i],
                    k: self.k[i],
                })
                .collect(),
            intersections,
        }
    }

    pub fn to_raw(&self) -> RawConfiguration {
        RawConfiguration {
            name: self.name.clone(),
            component_names: self.component_names.clone(),
            matrix: self.matrix.clone(),
            k: self.k.clone(),
            snc_faithful: self.snc_faithful,
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn component_name(&self, i: usize) -> &str {
        &self.component_names[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn k(&self) -> &[i64] {
        &self.k
    }

    pub fn snc_faithful(&self) -> bool {
        self.snc_faithful
    }

    /// Genus of a single component from adjunction: `(M[i][i] + k[i])/2 + 1`.
    pub fn component_genus(&self, i: usize) -> Result<i64> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        let sum = (self.matrix[i][i] as i128) + (self.k[i] as i128);
        debug_assert_eq!(sum.rem_euclid(2), 0);
        i64::try_from(sum / 2 + 1).map_err(|_| Error::Overflow)
    }

    /// Same numerical data, with components relabeled by `perm` (new index
    /// `i` takes the data of old index `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::NamesShape { len: perm.len(), expected: n });
        }
        let mut matrix = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                matrix[i][j] = self.matrix[perm[i]][perm[j]];
            }
        }
        Self::validate(RawConfiguration {
            name: self.name.clone(),
            component_names: perm.iter().map(|&p| self.component_names[p].clone()).collect(),
            matrix,
            k: perm.iter().map(|&p| self.k[p]).collect(),
            snc_faithful: self.snc_faithful,
        })
    }

    /// Structural compatibility for divisor arithmetic: same numerical data,
    /// names aside.
    pub fn compatible(&self, other: &SurfaceConfiguration) -> bool {
        self.matrix == other.matrix && self.k == other.k && self.snc_faithful == other.snc_faithful
    }
}

/// Non-zero effective divisor: non-negative multiplicities over a configuration.
#[derive(Debug, Clone)]
pub struct Divisor {
    config: Arc<SurfaceConfiguration>,
    mult: Vec<i64>,
}

impl Divisor {
    pub fn new(config: Arc<SurfaceConfiguration>, mult: Vec<i64>) -> Result<Self> {
        if mult.len() != config.n() {
            return Err(Error::MultiplicityShape { len: mult.len(), expected: config.n() });
        }
        for (index, &value) in mult.iter().enumerate() {
            if value < 0 {
                return Err(Error::NegativeMultiplicity { index, value });
            }
        }
        if mult.iter().all(|&v| v == 0) {
            return Err(Error::ZeroDivisor);
        }
        Ok(Divisor { config, mult })
    }

    /// Parse a comma-separated multiplicity string such as `"1,0,2"`.
    pub fn from_csv(config: Arc<SurfaceConfiguration>, text: &str) -> Result<Self> {
        let mut mult = Vec::new();
        for part in text.split(',') {
            let value = part
                .trim()
                .parse::<i64>()
                .map_err(|_| Error::Json(format!("invalid multiplicity {:?}", part.trim())))?;
            mult.push(value);
        }
        Divisor::new(config, mult)
    }

    pub fn config(&self) -> &Arc<SurfaceConfiguration> {
        &self.config
    }

    pub fn mult(&self) -> &[i64] {
        &self.mult
    }

    pub fn to_csv(&self) -> String {
        self.mult
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub(crate) fn same_config(&self, other: &Divisor) -> Result<()> {
        if Arc::ptr_eq(&self.config, &other.config) || self.config.compatible(&other.config) {
            Ok(())
        } else {
            Err(Error::ConfigMismatch)
        }
    }

    /// Componentwise order: true iff `self <= other` in every multiplicity.
    pub fn is_subdivisor_of(&self, other: &Divisor) -> Result<bool> {
        self.same_config(other)?;
        Ok(self.mult.iter().zip(&other.mult).all(|(a, b)| a <= b))
    }

    /// Strict componentwise order: subdivisor and not equal.
    pub fn is_proper_subdivisor_of(&self, other: &Divisor) -> Result<bool> {
        Ok(self.is_subdivisor_of(other)? && self.mult != other.mult)
    }

    /// Indices with positive multiplicity.
    pub fn support(&self) -> Vec<usize> {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// True iff every multiplicity is 0 or 1.
    pub fn is_reduced(&self) -> bool {
        self.mult.iter().all(|&v| v == 0 || v == 1)
    }

    /// Support indices together with reducedness.
    pub fn support_and_reducedness(&self) -> (Vec<usize>, bool) {
        (self.support(), self.is_reduced())
    }

    pub fn try_add(&self, other: &Divisor) -> Result<Divisor> {
        self.same_config(other)?;
        let mut mult = Vec::with_capacity(self.mult.len());
        for (a, b) in self.mult.iter().zip(&other.mult) {
            mult.push(a.checked_add(*b).ok_or(Error::Overflow)?);
        }
        Divisor::new(self.config.clone(), mult)
    }

    /// Componentwise difference; errors unless `other` is a proper subdivisor.
    pub fn try_sub(&self, other: &Divisor) -> Result<Divisor> {
        self.same_config(other)?;
        let mut mult = Vec::with_capacity(self.mult.len());
        for (index, (a, b)) in self.mult.iter().zip(&other.mult).enumerate() {
            let value = a - b;
            if value < 0 {
                return Err(Error::NegativeMultiplicity { index, value });
            }
            mult.push(value);
        }
        Divisor::new(self.config.clone(), mult)
    }

    /// Divisor scaled by a positive factor.
    pub fn scaled(&self, factor: i64) -> Result<Divisor> {
        if factor <= 0 {
            return Err(Error::ZeroDivisor);
        }
        let mut mult = Vec::with_capacity(self.mult.len());
        for &v in &self.mult {
            mult.push(v.checked_mul(factor).ok_or(Error::Overflow)?);
        }
        Divisor::new(self.config.clone(), mult)
    }

    pub fn permuted(&self, perm: &[usize], config: Arc<SurfaceConfiguration>) -> Result<Divisor> {
        let mult = perm.iter().map(|&p| self.mult[p]).collect();
        Divisor::new(config, mult)
    }
}

impl PartialEq for Divisor {
    fn eq(&self, other: &Self) -> bool {
        self.mult == other.mult && self.same_config(other).is_ok()
    }
}

impl Serialize for Divisor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Divisor", 1)?;
        s.serialize_field("mult", &self.mult)?;
        s.end()
    }
}

impl std::fmt::Display for Divisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_csv())
    }
}

/// Ordered pair of non-zero effective divisors summing to a decomposed curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub a: Divisor,
    pub b: Divisor,
}

impl Decomposition {
    pub fn from_parts(a: Divisor, b: Divisor) -> Result<Self> {
        a.same_config(&b)?;
        Ok(Decomposition { a, b })
    }

    /// The decomposed divisor, `a + b`.
    pub fn divisor(&self) -> Result<Divisor> {
        self.a.try_add(&self.b)
    }
}

impl std::fmt::Display for Decomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} | {}", self.a, self.b)
    }
}
