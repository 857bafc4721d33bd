"""Block partitions, weight sequences and certified weak-Hardy counterexamples"""

from hardylab.lemma1.counterexample import (
    BlockIdentity,
    CertificateCheck,
    CounterexampleReport,
    CounterexampleSeries,
    build_partition,
    check_certificates,
    counterexample,
)
from hardylab.lemma1.main import (
    BlockPartition,
    PartitionCase,
    RSequence,
    build_blocks_case1,
    build_blocks_case2,
    emit_r,
)

__version__ = "1.0.0"

__all__ = [
    "BlockIdentity",
    "BlockPartition",
    "CertificateCheck",
    "CounterexampleReport",
    "CounterexampleSeries",
    "PartitionCase",
    "RSequence",
    "build_blocks_case1",
    "build_blocks_case2",
    "build_partition",
    "check_certificates",
    "counterexample",
    "emit_r",
]
