//! Self-contained symmetric eigensolvers, a small sparse matrix type and the
//! matrix exponential used by the squeezing oracle.

mod dense;
mod expm;
mod sparse;
mod tridiag;

pub use dense::{eig_2x2, eig_sym_dense, DenseSym, Matrix, SymEigen};
pub use expm::expm_antisymmetric;
pub use sparse::SparseMatrix;
pub use tridiag::{eig_sym_tridiag, eig_sym_tridiag_vectors, TridiagMatrix};
