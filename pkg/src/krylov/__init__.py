"""
Krylov preconditioning workbench
Sparse CSR matrices, restarted GMRES and hyperpower approximate-inverse preconditioners
"""

from src.krylov.gmres import GmresConfig, GmresReport, gmres
from src.krylov.preconditioner import build_preconditioner, jacobi_preconditioner
from src.krylov.problems import shifted_laplacian
from src.krylov.sparse import SparseMatrix, densify, read_sparse, read_vector, sparsify, spmv, write_sparse

__all__ = [
    "GmresConfig",
    "GmresReport",
    "SparseMatrix",
    "build_preconditioner",
    "densify",
    "gmres",
    "jacobi_preconditioner",
    "read_sparse",
    "read_vector",
    "shifted_laplacian",
    "sparsify",
    "spmv",
    "write_sparse",
]
