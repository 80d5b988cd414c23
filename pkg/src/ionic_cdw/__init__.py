"""Exact-diagonalization checks for the extended ionic Hubbard model on small tori."""
from .fock import FockSpace
from .lattice import HalfSplit, TorusLattice, build_torus, geometric_torus, parity, reflect
from .model import ModelParams, build_hamiltonian, build_T_W, zigzag_unitary

__version__ = "0.1.0"
