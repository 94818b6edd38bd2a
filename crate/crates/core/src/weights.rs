//! Nonnegative element weights. Elements without an entry weigh zero, which
//! is how elements introduced by a decomposition are valued.

use std::collections::BTreeMap;
use std::io::Read;

use thiserror::Error;

use crate::matroid::ElementId;

#[derive(Debug, Error)]
pub enum WeightError {
    #[error("weight of element {element} is {weight}; weights must be finite and nonnegative")]
    Invalid { element: ElementId, weight: f64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Weights(BTreeMap<ElementId, f64>);

impl Weights {
    pub fn from_pairs<I>(pairs: I) -> Result<Self, WeightError>
    where
        I: IntoIterator<Item = (ElementId, f64)>,
    {
        let mut map = BTreeMap::new();
        for (element, weight) in pairs {
            if !weight.is_finite() || weight < 0.0 {
                return Err(WeightError::Invalid { element, weight });
            }
            map.insert(element, weight);
        }
        Ok(Self(map))
    }

    /// Weight 1 on every listed element.
    pub fn unit<'a, I: IntoIterator<Item = &'a ElementId>>(elements: I) -> Self {
        Self(elements.into_iter().map(|&e| (e, 1.0)).collect())
    }

    pub fn get(&self, e: ElementId) -> f64 {
        self.0.get(&e).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElementId, f64)> + '_ {
        self.0.iter().map(|(&e, &w)| (e, w))
    }

    /// Reads `element_id,weight` lines. A leading `element_id,weight` header
    /// line is accepted and skipped.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self, WeightError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut pairs = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let record = record?;
            let line = i + 1;
            if record.len() != 2 {
                return Err(WeightError::Parse {
                    line,
                    message: format!("expected 2 fields, found {}", record.len()),
                });
            }
            if i == 0 && &record[0] == "element_id" {
                continue;
            }
            let id: u32 = record[0].parse().map_err(|e| WeightError::Parse {
                line,
                message: format!("bad element id {:?}: {e}", &record[0]),
            })?;
            let w: f64 = record[1].parse().map_err(|e| WeightError::Parse {
                line,
                message: format!("bad weight {:?}: {e}", &record[1]),
            })?;
            pairs.push((ElementId(id), w));
        }
        Self::from_pairs(pairs)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("element_id,weight\n");
        for (e, w) in self.iter() {
            out.push_str(&format!("{e},{w}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_elements_weigh_zero() {
        let w = Weights::from_pairs([(ElementId(1), 2.5)]).unwrap();
        assert_eq!(w.get(ElementId(1)), 2.5);
        assert_eq!(w.get(ElementId(2)), 0.0);
    }

    #[test]
    fn negative_and_nan_weights_are_rejected() {
        assert!(matches!(
            Weights::from_pairs([(ElementId(1), -1.0)]),
            Err(WeightError::Invalid { .. })
        ));
        assert!(Weights::from_pairs([(ElementId(1), f64::NAN)]).is_err());
    }

    #[test]
    fn csv_with_and_without_header() {
        let a = Weights::from_csv("element_id,weight\n1,0.5\n2, 3\n".as_bytes()).unwrap();
        let b = Weights::from_csv("1,0.5\n2,3\n".as_bytes()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(ElementId(2)), 3.0);
        let back = Weights::from_csv(a.to_csv().as_bytes()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn csv_errors() {
        assert!(matches!(
            Weights::from_csv("1,x\n".as_bytes()),
            Err(WeightError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Weights::from_csv("1,2,3\n".as_bytes()),
            Err(WeightError::Parse { .. })
        ));
        assert!(matches!(
            Weights::from_csv("4,-2\n".as_bytes()),
            Err(WeightError::Invalid { .. })
        ));
    }
}
