//! Discrete oracles backed by a delimited table: each row is a design with
//! an objective value and one column per abstract property.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{BoapError, Result};
use crate::oracles::Problem;
use crate::space::SearchSpace;

/// Column roles for a dataset file.
///
/// ```toml
/// design = ["pressure", "porosity"]
/// objective = "active_surface"
/// properties = ["tau_liq", "output_porosity"]
/// delimiter = ","
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSchema {
    pub design: Vec<String>,
    pub objective: String,
    pub properties: Vec<String>,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
}

fn default_delimiter() -> char {
    ','
}

impl DatasetSchema {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| BoapError::Dataset {
            row: 0,
            column: String::new(),
            message: format!("schema: {e}"),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetOracle {
    name: String,
    schema: DatasetSchema,
    designs: Vec<Vec<f64>>,
    objective: Vec<f64>,
    properties: Vec<Vec<f64>>,
    space: SearchSpace,
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| BoapError::Dataset {
            row: 0,
            column: name.to_string(),
            message: "missing column".into(),
        })
}

/// Reads a dataset. Rows with identical designs are pooled by averaging
/// their objective and property values.
pub fn load_dataset(path: impl AsRef<Path>, schema: &DatasetSchema) -> Result<DatasetOracle> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    DatasetOracle::from_reader(name, text.as_bytes(), schema)
}

impl DatasetOracle {
    pub fn from_reader(name: impl Into<String>, reader: impl std::io::Read, schema: &DatasetSchema) -> Result<Self> {
        if schema.design.is_empty() {
            return Err(BoapError::Dataset {
                row: 0,
                column: String::new(),
                message: "schema declares no design columns".into(),
            });
        }
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(schema.delimiter as u8)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| BoapError::Dataset {
                row: 0,
                column: String::new(),
                message: e.to_string(),
            })?
            .clone();
        let design_idx = schema
            .design
            .iter()
            .map(|c| column_index(&headers, c))
            .collect::<Result<Vec<_>>>()?;
        let objective_idx = column_index(&headers, &schema.objective)?;
        let property_idx = schema
            .properties
            .iter()
            .map(|c| column_index(&headers, c))
            .collect::<Result<Vec<_>>>()?;

        // Keyed by the bit patterns of the design so pooling is exact and
        // the output order is deterministic (first appearance).
        let mut order: Vec<Vec<u64>> = Vec::new();
        let mut groups: BTreeMap<Vec<u64>, (Vec<f64>, f64, Vec<f64>, usize)> = BTreeMap::new();
        for (i, record) in rdr.records().enumerate() {
            let row = i + 1;
            let record = record.map_err(|e| BoapError::Dataset {
                row,
                column: String::new(),
                message: e.to_string(),
            })?;
            let cell = |idx: usize| -> Result<f64> {
                let raw = record.get(idx).unwrap_or("");
                raw.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| BoapError::Dataset {
                        row,
                        column: headers.get(idx).unwrap_or("").to_string(),
                        message: format!("non-numeric value `{raw}`"),
                    })
            };
            let design = design_idx.iter().map(|&c| cell(c)).collect::<Result<Vec<_>>>()?;
            let obj = cell(objective_idx)?;
            let props = property_idx.iter().map(|&c| cell(c)).collect::<Result<Vec<_>>>()?;
            let key: Vec<u64> = design.iter().map(|v| (v + 0.0).to_bits()).collect();
            match groups.get_mut(&key) {
                Some(entry) => {
                    entry.1 += obj;
                    for (acc, p) in entry.2.iter_mut().zip(&props) {
                        *acc += p;
                    }
                    entry.3 += 1;
                }
                None => {
                    order.push(key.clone());
                    groups.insert(key, (design, obj, props, 1));
                }
            }
        }
        if order.is_empty() {
            return Err(BoapError::Dataset {
                row: 0,
                column: String::new(),
                message: "dataset has no rows".into(),
            });
        }

        let mut designs = Vec::with_capacity(order.len());
        let mut objective = Vec::with_capacity(order.len());
        let mut properties = Vec::with_capacity(order.len());
        for key in &order {
            let (d, o, p, count) = &groups[key];
            let c = *count as f64;
            designs.push(d.clone());
            objective.push(o / c);
            properties.push(p.iter().map(|v| v / c).collect());
        }

        let dim = schema.design.len();
        let mut lower = vec![f64::INFINITY; dim];
        let mut upper = vec![f64::NEG_INFINITY; dim];
        for d in &designs {
            for j in 0..dim {
                lower[j] = lower[j].min(d[j]);
                upper[j] = upper[j].max(d[j]);
            }
        }
        for j in 0..dim {
            // A constant column still needs a non-empty box.
            if lower[j] == upper[j] {
                lower[j] -= 0.5;
                upper[j] += 0.5;
            }
        }
        Ok(Self {
            name: name.into(),
            schema: schema.clone(),
            designs,
            objective,
            properties,
            space: SearchSpace::new(lower, upper)?,
        })
    }

    pub fn len(&self) -> usize {
        self.designs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.designs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.schema.design.len()
    }

    pub fn designs(&self) -> &[Vec<f64>] {
        &self.designs
    }

    pub fn objective_values(&self) -> &[f64] {
        &self.objective
    }

    /// Index of the row with the largest objective (first on ties).
    pub fn best_row(&self) -> usize {
        crate::acquisition::argmax_lowest(&self.objective)
    }

    fn row_of(&self, x: &[f64]) -> Result<usize> {
        self.designs
            .iter()
            .position(|d| d.as_slice() == x)
            .ok_or_else(|| BoapError::InvalidArgument(format!("{x:?} is not a design in the candidate pool")))
    }
}

impl Problem for DatasetOracle {
    fn name(&self) -> &str {
        &self.name
    }

    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn objective(&self, x: &[f64]) -> Result<f64> {
        Ok(self.objective[self.row_of(x)?])
    }

    fn property_labels(&self) -> Vec<String> {
        self.schema.properties.clone()
    }

    fn property(&self, idx: usize, x: &[f64]) -> Result<f64> {
        let row = self.row_of(x)?;
        self.properties[row]
            .get(idx)
            .copied()
            .ok_or_else(|| BoapError::InvalidArgument(format!("property index {idx} out of range")))
    }

    fn true_max(&self) -> Option<f64> {
        Some(self.objective[self.best_row()])
    }

    fn candidate_pool(&self) -> Option<&[Vec<f64>]> {
        Some(&self.designs)
    }

    fn evaluation_noise(&self) -> f64 {
        0.0
    }
}
