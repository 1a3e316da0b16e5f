use serde::{Deserialize, Serialize};
use supercheq::{EncodingSpec, Variant};

use crate::error::CliResult;

/// Circuit families selectable from configs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "grid2d_gr")]
    Grid2dGr,
    #[serde(rename = "fully_connected_gr")]
    FullyConnectedGr,
    #[serde(rename = "brickwork_1d")]
    Brickwork1d,
    #[serde(rename = "local_linear")]
    LocalLinear,
}

/// Most square `rows × cols = n` with `rows ≤ cols`.
pub fn grid_shape(n: usize) -> (usize, usize) {
    let mut rows = (n as f64).sqrt() as usize;
    while rows > 1 && !n.is_multiple_of(rows) {
        rows -= 1;
    }
    let rows = rows.max(1);
    (rows, n / rows)
}

impl Family {
    pub fn spec(self, n: usize, layers: usize, grid: Option<(usize, usize)>) -> CliResult<EncodingSpec> {
        let variant = match self {
            Family::Grid2dGr => {
                let (rows, cols) = grid.unwrap_or_else(|| grid_shape(n));
                Variant::Grid2dGr { rows, cols, layers }
            }
            Family::FullyConnectedGr => Variant::FullyConnectedGr { layers },
            Family::Brickwork1d => Variant::Brickwork1d { layers },
            Family::LocalLinear => Variant::LocalLinear { layers },
        };
        Ok(EncodingSpec::new(variant, n)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(grid_shape(9), (3, 3));
        assert_eq!(grid_shape(12), (3, 4));
        assert_eq!(grid_shape(7), (1, 7));
        assert_eq!(grid_shape(1), (1, 1));
    }
}
