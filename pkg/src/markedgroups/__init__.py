"""Exact computations in the space of marked groups.

Core objects: freely reduced words (:mod:`markedgroups.words`), concrete
group families with canonical-form elements (:mod:`markedgroups.groups`),
marked groups with relation balls and the Gromov-Grigorchuk metric
(:mod:`markedgroups.marked`), universal sentence checking
(:mod:`markedgroups.logic`), presentations and residual witnesses
(:mod:`markedgroups.residual`), and the limit-structure verification
pipelines (:mod:`markedgroups.structure`).
"""

from .words import BallSpec, Letter, Word, ball_size, enumerate_reduced, evaluate
from .groups import (
    CentralQuotient,
    Cyclic,
    Dihedral,
    FinAbelian,
    FreeAbelianCyclic,
    Group,
    InfiniteGroupError,
    LimitQuaternion,
    Quaternion,
    Sd2,
    Sd4,
    central_quotient,
    iso_search,
    parse_group,
)
from .marked import (
    BallGraph,
    DistanceResult,
    MarkedGroup,
    NotStabilizedError,
    RelationBall,
    SequenceSpec,
    ball_graph,
    ball_isomorphic,
    converged_at,
    gg_distance,
    liminf_relations,
    limit_compare,
    limsup_relations,
    mark,
    rel_ball,
    rel_ball_bfs,
    std_marked,
)
from .logic import (
    UniversalSentence,
    eventual_truth,
    holds,
    holds_bounded,
    parse_sentence,
    torsion_free,
    unique_involution,
    universal_transfer_check,
)
from .residual import (
    Homomorphism,
    Presentation,
    fully_residual_check,
    homs,
    parse_presentation,
    presentation_of_limit,
    residual_witness,
)
from .structure import (
    CaseReport,
    LiftedSequence,
    abelian_limit_check,
    case_analysis,
    center_formula_check,
    centrality_transfer_check,
    dihedral_lift,
    kernel_identification,
    quaternion_lift,
    quotient_limit_check,
)

__version__ = "0.1.0"
