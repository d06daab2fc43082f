"""Finite spectral spaces, quotient-map predicates, and computed equivariant spectra."""
from .errors import (CapExceeded, HypothesisFailed, NonT0Error, NotMonotoneError,
                     PreconditionError, TTGError, UnknownPointError)
from .spaces import (FiniteSpectralSpace, PointPartition, SpectralMap, check_section_lemma,
                     connected_components, disconnected_fibers, fibers_connected,
                     has_weak_lifting, has_weak_lifting_property,
                     is_heritable_weak_spectral_quotient, is_spectral_quotient,
                     is_strong_topological_quotient, is_topological_quotient,
                     is_weak_spectral_quotient, quotient_space)
from .groups import PermGroup, SubgroupLattice, catalog, is_p_subnormal, o_p, subgroup_lattice
from .burnside import (BurnsidePoint, MarksTable, dress_equal, mark_kernel_contained,
                       spec_burnside, table_of_marks)
from .equivariant import (dhzg_comparison, shg_infinity_gluing, spc_dhzg, spc_shg_cp,
                          unigenic_locus_dhzg, unitation_shg_cp)

__version__ = "0.1.0"
