"""Constructors for classical integrable sets of resonant oscillators."""

from .core import (IntegrableSet, PreconditionError, build_general_set, build_J_r, build_R_m,
                   build_rij_set, build_trivial_set, compose_hamiltonian, dot, im_R_m,
                   normalize_frequencies, re_R_m, resonance_basis, rij_vector, search_vectors)
from .equal_freq import (EqualFreqObjects, GroupPartition, J_group, build_equal_freq_objects,
                         build_partition_set, build_ZL, momentum_P, nested_casimir, omega_R_m,
                         w_variables)
from .n3 import (AFunction, N3Catalog, NonClassifiableError, RepMatrices, A_family, L_basis,
                 P12, Q12, build_exceptional_set, build_n3_catalog, build_rep_matrices,
                 build_simple_set, classify_simple_F2, exceptional_pieces, n3_pattern,
                 intertwiner_coefficient, simple_m_vector)
from .transforms import (SIGMA, SymplecticTransform, apply_symplectic, exact_phase, is_unitary,
                         quarter_turn, rotation_of)

__all__ = [k for k in dir() if not k.startswith("_")]
