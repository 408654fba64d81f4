"""Lattice scattering off short-range PT-symmetric potentials."""
from .errors import (BandViolation, DegreeBoundExceeded, DeterminantOverflow,
                     DimensionMismatch, InvalidStep, LengthMismatch, NearSingular,
                     NonFinite, PersymmetryViolation, ScatteringError,
                     SpectralSingularity, StepMismatch, UnsupportedM)
from .kernels import BACKEND
from .lattice import (LatticePotential, PhaseEnergy, make_potential, phase,
                      phase_from_energy, sample_barrier, sample_rectangular)
from .matching_solver import (closed_form_M1, closed_form_M2, discrete_wronskian,
                              solve_full_matching)
from .matrix_solver import (TMatrix, amplitudes_from_corners, build_tmatrix,
                            corner_inverse, solve, solve_left, solve_right, sweep)
from .solution import CornerCoefficients, ScatteringSolution, Side

__version__ = "0.1.0"
