use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::calculus::Kind;
use crate::frame::{frame_components, l_matrix, GammaChoice, LambdaFamily};
use crate::ncalgebra::Algebra;
use crate::rmatrix::TensorJson;
use crate::scalar::Field;

use super::ConfigError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportItem {
    Rhat,
    Metric,
    Projectors,
    Lambda,
    Frame,
    Lmatrix,
}

impl ExportItem {
    pub const ALL: [ExportItem; 6] = [
        ExportItem::Rhat,
        ExportItem::Metric,
        ExportItem::Projectors,
        ExportItem::Lambda,
        ExportItem::Frame,
        ExportItem::Lmatrix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExportItem::Rhat => "rhat",
            ExportItem::Metric => "metric",
            ExportItem::Projectors => "projectors",
            ExportItem::Lambda => "lambda",
            ExportItem::Frame => "frame",
            ExportItem::Lmatrix => "lmatrix",
        }
    }
}

impl FromStr for ExportItem {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        ExportItem::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| ConfigError::Value { field: "--what", value: s.into() })
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ProjectorsJson {
    pub sym: TensorJson,
    pub anti: TensorJson,
    pub trace: TensorJson,
}

/// One algebra element per label, rendered in the input syntax.
#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct LabelledJson {
    pub label: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    pub element: String,
}

/// A matrix of elements, rows and columns by label.
#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct MatrixJson {
    pub labels: Vec<i32>,
    pub entries: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct PerCalculus<T> {
    pub unbarred: T,
    pub barred: T,
}

/// The JSON document for one export item.
pub fn export<F: Field>(alg: &Algebra<F>, gamma: &GammaChoice, item: ExportItem) -> Result<serde_json::Value, ConfigError> {
    let fam = |kind: Kind| -> Result<LambdaFamily<F>, ConfigError> {
        let g = gamma.resolve(alg.params(), alg.index(), kind).map_err(|e| ConfigError::Gamma(e.to_string()))?;
        LambdaFamily::new(alg, kind, g).map_err(|e| ConfigError::Gamma(e.to_string()))
    };
    let labels = alg.index().labels().to_vec();
    let matrix = |m: &crate::frame::ElementMatrix<F>| MatrixJson {
        labels: labels.clone(),
        entries: m.entries.iter().map(|row| row.iter().map(|e| alg.render(e)).collect()).collect(),
    };
    let both = |f: &dyn Fn(Kind) -> Result<serde_json::Value, ConfigError>| -> Result<serde_json::Value, ConfigError> {
        Ok(serde_json::to_value(PerCalculus { unbarred: f(Kind::Unbarred)?, barred: f(Kind::Barred)? })
            .expect("serializes"))
    };
    let v = match item {
        ExportItem::Rhat => serde_json::to_value(alg.rhat().to_json()),
        ExportItem::Metric => serde_json::to_value(alg.metric().to_json()),
        ExportItem::Projectors => {
            let p = alg.projectors();
            serde_json::to_value(ProjectorsJson { sym: p.sym.to_json(), anti: p.anti.to_json(), trace: p.trace.to_json() })
        }
        ExportItem::Lambda => {
            return both(&|k| {
                let fam = fam(k)?;
                let items: Vec<LabelledJson> = labels
                    .iter()
                    .zip(&fam.gamma)
                    .map(|(&a, g)| LabelledJson {
                        label: a,
                        constant: Some(g.to_string()),
                        element: alg.render(fam.get(alg, a)),
                    })
                    .collect();
                Ok(serde_json::to_value(items).expect("serializes"))
            })
        }
        ExportItem::Frame => {
            return both(&|k| Ok(serde_json::to_value(matrix(&frame_components(alg, &fam(k)?))).expect("serializes")))
        }
        ExportItem::Lmatrix => {
            return both(&|k| Ok(serde_json::to_value(matrix(&l_matrix(alg, &fam(k)?))).expect("serializes")))
        }
    };
    Ok(v.expect("serializes"))
}
