"""Pathwise quadratic variation of càdlàg paths along partition sequences."""

from .paths import (CadlagPath, DomainError, PathFormatError, StepIncreasing,
                    VectorCadlagPath, pointwise_combine, read_csv, write_csv)
from .partitions import Partition, PartitionError, PartitionScheme, parse_levels, parse_scheme
from .measures import DiscreteMeasure, TestFunction, integrate
from .qv import (LConditionError, QVDecomposition, ConvergenceReport, lebesgue_decompose,
                 mu_n, p_n, q_n, qv_limit, quartic_jump_sum, s_n, sn_qn_discrepancy)
from .skorokhod import (TimeChange, j1_distance_compact, j1_distance_halfline, j1_within,
                        uniform_distance, classify_convergence_mode)

__version__ = "0.1.0"
