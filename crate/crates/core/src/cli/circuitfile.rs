use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuits::{Fdfc, Gate, Layer};
use crate::graded::Cell;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateFile {
    pub cells: Vec<Cell>,
    /// Row-major Jordan-Wigner matrix in slot order, entries as `[re, im]`.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LayerFile {
    /// `template` repeated at `offset + k * period`.
    Periodic { offset: i64, period: i64, template: GateFile },
    Finite { gates: Vec<GateFile> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    pub layers: Vec<LayerFile>,
}

fn gate_file(g: &Gate) -> Result<GateFile, String> {
    let m = g.matrix().map_err(|e| e.to_string())?;
    let matrix = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    Ok(GateFile {
        cells: g.cells().to_vec(),
        matrix,
    })
}

fn gate_of(f: &GateFile) -> Result<Gate, String> {
    let n = f.matrix.len();
    if f.matrix.iter().any(|row| row.len() != n) {
        return Err("gate matrix is not square".into());
    }
    let m = DMatrix::from_fn(n, n, |i, j| Complex64::new(f.matrix[i][j][0], f.matrix[i][j][1]));
    Gate::from_matrix(&m, f.cells.clone()).map_err(|e| e.to_string())
}

impl CircuitFile {
    pub fn from_fdfc(c: &Fdfc) -> Result<Self, String> {
        let layers = c
            .layers()
            .iter()
            .map(|l| {
                Ok(match l {
                    Layer::Periodic {
                        template,
                        offset,
                        period,
                    } => LayerFile::Periodic {
                        offset: *offset,
                        period: *period,
                        template: gate_file(template)?,
                    },
                    Layer::Finite(gates) => LayerFile::Finite {
                        gates: gates.iter().map(gate_file).collect::<Result<_, String>>()?,
                    },
                })
            })
            .collect::<Result<_, String>>()?;
        Ok(CircuitFile { layers })
    }

    pub fn to_fdfc(&self) -> Result<Fdfc, String> {
        let layers = self
            .layers
            .iter()
            .map(|l| match l {
                LayerFile::Periodic {
                    offset,
                    period,
                    template,
                } => Layer::periodic(gate_of(template)?, *offset, *period).map_err(|e| e.to_string()),
                LayerFile::Finite { gates } => {
                    Layer::finite(gates.iter().map(gate_of).collect::<Result<_, _>>()?).map_err(|e| e.to_string())
                }
            })
            .collect::<Result<_, String>>()?;
        Ok(Fdfc::new(layers))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed circuit file: {e}"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit files serialize")
    }
}
