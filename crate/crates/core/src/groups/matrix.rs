use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use super::GroupError;

pub type Mat4 = Matrix4<f64>;

/// Tolerance used when validating group membership of a matrix.
pub const CONSTRUCTION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    Sl4,
    Sp4,
    So4,
    UpperUnipotent,
    /// Unipotent factor of the symplectic Iwasawa decomposition: unit diagonal,
    /// nonzero off-diagonal entries only at (1,2),(1,3),(1,4),(2,3),(2,4),(4,3).
    SpUnipotent,
    DiagPositive,
}

/// A 4×4 real matrix together with the group it is known to belong to.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixElement {
    entries: Mat4,
    tag: GroupTag,
}

/// The block matrix `[[0, I], [-I, 0]]` defining the symplectic group.
pub fn symplectic_form() -> Mat4 {
    let mut j = Mat4::zeros();
    j[(0, 2)] = 1.0;
    j[(1, 3)] = 1.0;
    j[(2, 0)] = -1.0;
    j[(3, 1)] = -1.0;
    j
}

/// `‖g J gᵀ − J‖_∞` (max-abs entry).
pub fn symplectic_defect(g: &Mat4) -> f64 {
    let j = symplectic_form();
    (g * j * g.transpose() - j).amax()
}

pub fn orthogonality_defect(g: &Mat4) -> f64 {
    (g.transpose() * g - Mat4::identity()).amax()
}

const SP_UNIPOTENT_ZEROS: [(usize, usize); 6] = [(1, 0), (2, 0), (2, 1), (2, 3), (3, 0), (3, 1)];

fn invariant_defect(m: &Mat4, tag: GroupTag) -> f64 {
    match tag {
        GroupTag::Sl4 => (m.determinant() - 1.0).abs(),
        GroupTag::Sp4 => symplectic_defect(m),
        GroupTag::So4 => {
            let d = orthogonality_defect(m);
            if m.determinant() > 0.0 {
                d
            } else {
                f64::INFINITY
            }
        }
        GroupTag::UpperUnipotent => {
            let mut bad = false;
            for i in 0..4 {
                bad |= m[(i, i)] != 1.0;
                for j in 0..i {
                    bad |= m[(i, j)] != 0.0;
                }
            }
            if bad {
                f64::INFINITY
            } else {
                0.0
            }
        }
        GroupTag::SpUnipotent => {
            let mut defect = symplectic_defect(m);
            for i in 0..4 {
                defect = defect.max((m[(i, i)] - 1.0).abs());
            }
            for &(i, j) in &SP_UNIPOTENT_ZEROS {
                defect = defect.max(m[(i, j)].abs());
            }
            defect
        }
        GroupTag::DiagPositive => {
            let mut defect: f64 = 0.0;
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        defect = defect.max(m[(i, j)].abs());
                    }
                }
                if m[(i, i)] <= 0.0 {
                    return f64::INFINITY;
                }
            }
            let prod: f64 = (0..4).map(|i| m[(i, i)]).product();
            // product = 1 is checked at 1e-12, i.e. a hundred times tighter than
            // the generic construction tolerance.
            defect.max((prod - 1.0).abs() * 100.0)
        }
    }
}

impl MatrixElement {
    /// Validates `entries` against the invariants of `tag`.
    pub fn new(entries: Mat4, tag: GroupTag) -> Result<Self, GroupError> {
        let defect = invariant_defect(&entries, tag);
        if defect.is_finite() && defect <= CONSTRUCTION_TOL {
            Ok(Self { entries, tag })
        } else if tag == GroupTag::Sp4 {
            Err(GroupError::SymplecticViolation { defect })
        } else {
            Err(GroupError::InvariantViolation { tag, defect })
        }
    }

    pub fn identity(tag: GroupTag) -> Self {
        Self {
            entries: Mat4::identity(),
            tag,
        }
    }

    pub fn entries(&self) -> &Mat4 {
        &self.entries
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    /// Rows of the matrix, suitable for the row-major JSON debug dump.
    pub fn rows(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.entries[(i, j)];
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.rows()).expect("finite matrix serializes")
    }

    pub fn from_json(text: &str, tag: GroupTag) -> Result<Self, GroupError> {
        let rows: [[f64; 4]; 4] =
            serde_json::from_str(text).map_err(|e| GroupError::Parse(e.to_string()))?;
        Self::new(Mat4::from_fn(|i, j| rows[i][j]), tag)
    }
}
