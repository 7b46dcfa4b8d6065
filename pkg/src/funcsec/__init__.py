"""Two-party secure computation with function-level privacy.

Decide whether f can be computed while hiding g from Alice and h from Bob,
synthesize the protocol or a forbidden-rectangle certificate, and audit
privacy and eavesdropper leakage exactly.
"""

from .characterize import Computable, NotComputable, decide, equivalence_partition, related, verify_witness
from .core import (
    Alphabet,
    Axis,
    FunctionTriple,
    JointDistribution,
    Limits,
    SubRect,
    iid_extend,
    parse_distribution,
    parse_triple,
)
from .privacy import check_correct, check_transcript_privacy, claim1_audit
from .protocol import Leaf, Internal, ProtocolTree, Speaker, Transcript, evaluate, transcript_pmf

__all__ = [
    "Alphabet", "Axis", "Computable", "FunctionTriple", "Internal", "JointDistribution", "Leaf", "Limits",
    "NotComputable", "ProtocolTree", "Speaker", "SubRect", "Transcript", "check_correct", "check_transcript_privacy",
    "claim1_audit", "decide", "equivalence_partition", "evaluate", "iid_extend", "parse_distribution",
    "parse_triple", "related", "transcript_pmf", "verify_witness",
]

__version__ = "0.1.0"
