use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::wchar::character_table;
use crate::coxeter::{CartanType, Family};
use crate::error::{Error, Result};

const BUILTIN_B2: &str = include_str!("../../data/fourier/B2.json");

/// Fourier matrix `{χ′, χ}` restricted to the irreducible characters of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierBlock {
    pub ct: CartanType,
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<BigRational>>,
}

impl FourierBlock {
    pub fn identity(ct: CartanType) -> Result<Self> {
        let labels = character_table(ct)?.labels.clone();
        let n = labels.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        Ok(Self { ct, labels, matrix })
    }

    pub fn entry(&self, row: &str, col: &str) -> Option<&BigRational> {
        let i = self.labels.iter().position(|l| l == row)?;
        let j = self.labels.iter().position(|l| l == col)?;
        Some(&self.matrix[i][j])
    }

    /// Square, symmetric, and labelled by exactly the irreducible characters.
    pub fn validate(&self) -> Result<()> {
        let n = self.labels.len();
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Data(format!("Fourier matrix for {} must be {n}×{n}", self.ct)));
        }
        for i in 0..n {
            for j in 0..i {
                if self.matrix[i][j] != self.matrix[j][i] {
                    return Err(Error::Data(format!(
                        "Fourier matrix for {} is not symmetric at ({}, {})",
                        self.ct, self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        let mut ours = character_table(self.ct)?.labels.clone();
        let mut theirs = self.labels.clone();
        ours.sort();
        theirs.sort();
        if ours != theirs {
            return Err(Error::Data(format!(
                "Fourier labels {:?} do not match the characters {:?} of {}",
                self.labels, ours, self.ct
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.ct.family.to_string(),
            "rank": self.ct.rank,
            "labels": self.labels,
            "matrix": self.matrix.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Data(format!("Fourier data: {e}")))?;
        let obj = v.as_object().ok_or_else(|| Error::Data("Fourier data must be a JSON object".into()))?;
        for key in obj.keys() {
            if !["family", "rank", "labels", "matrix"].contains(&key.as_str()) {
                return Err(Error::Data(format!("Fourier data has unknown field {key:?}")));
            }
        }
        let field = |k: &str| obj.get(k).ok_or_else(|| Error::Data(format!("Fourier data lacks {k:?}")));
        let family = field("family")?.as_str().ok_or_else(|| Error::Data("family must be a string".into()))?;
        let rank = field("rank")?.as_u64().ok_or_else(|| Error::Data("rank must be a nonnegative integer".into()))?;
        let ct = CartanType::new(family.parse()?, rank as usize)?;
        let labels = field("labels")?
            .as_array()
            .ok_or_else(|| Error::Data("labels must be an array".into()))?
            .iter()
            .map(|l| l.as_str().map(String::from).ok_or_else(|| Error::Data("labels must be strings".into())))
            .collect::<Result<Vec<_>>>()?;
        let matrix = field("matrix")?
            .as_array()
            .ok_or_else(|| Error::Data("matrix must be an array of rows".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Data("matrix rows must be arrays".into()))?
                    .iter()
                    .map(|x| {
                        x.as_str()
                            .and_then(|s| s.trim().parse::<BigRational>().ok())
                            .ok_or_else(|| Error::Data(format!("matrix entry {x} is not a rational string")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let block = Self { ct, labels, matrix };
        block.validate()?;
        Ok(block)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        std::fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

/// The identity in type A; a data file otherwise, with the bundled `B_2`
/// block used when no file is given.
pub fn fourier_block(ct: CartanType, data: Option<&Path>) -> Result<FourierBlock> {
    let block = match (ct.family, data) {
        (Family::A, None) => return FourierBlock::identity(ct),
        (_, Some(path)) => FourierBlock::load(path)?,
        (Family::B, None) if ct.rank == 2 => FourierBlock::from_json_str(BUILTIN_B2)?,
        (_, None) => return Err(Error::Unsupported(format!("no Fourier data for {ct}; supply a data file"))),
    };
    if block.ct != ct {
        return Err(Error::TypeMismatch(block.ct.name(), ct.name()));
    }
    Ok(block)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_a_identity() {
        let f = fourier_block(CartanType::a(2), None).unwrap();
        assert_eq!(f.labels, vec!["3", "21", "111"]);
        assert_eq!(f.entry("21", "21"), Some(&BigRational::one()));
        assert_eq!(f.entry("3", "21"), Some(&BigRational::zero()));
    }

    #[test]
    fn wrong_label_count_is_rejected() {
        let text = r#"{"family": "B", "rank": 2, "labels": ["2.", "11.", "1.1", ".2"],
            "matrix": [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}"#;
        assert!(FourierBlock::from_json_str(text).is_err());
    }

    #[test]
    fn asymmetric_and_malformed_are_rejected() {
        let base = FourierBlock::identity(CartanType::a(1)).unwrap();
        let mut bad = base.clone();
        bad.matrix[0][1] = BigRational::new(1.into(), 2.into());
        assert!(bad.validate().is_err());
        assert!(FourierBlock::from_json_str(
            r#"{"family": "A", "rank": 1, "labels": ["2", "11"], "matrix": [[1, 0], [0, 1]]}"#
        )
        .is_err());
        assert!(FourierBlock::from_json_str(r#"{"family": "A", "rank": 1}"#).is_err());
    }

    #[test]
    fn identity_round_trip() {
        let f = FourierBlock::identity(CartanType::b(2)).unwrap();
        let dir = std::env::temp_dir().join(format!("mtk-fourier-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("id.json");
        f.save(&path).unwrap();
        assert_eq!(FourierBlock::load(&path).unwrap(), f);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn bundled_b2_block() {
        let f = fourier_block(CartanType::b(2), None).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.entry("1.1", "1.1"), Some(&half));
        assert_eq!(f.entry("2.", "2."), Some(&BigRational::one()));
        assert!(fourier_block(CartanType::b(3), None).is_err());
    }
}
