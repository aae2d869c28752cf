"""Named time series of entanglement measures over partitions.

A token such as ``cc`` or ``c1r1_vs_c2r2`` selects a partition; the measure
is picked from the partition type and the Fock cutoff:

* two-party reduced state: concurrence for qubits (d=1), LBOE otherwise;
* bipartition of the global pure state: I-concurrence;
* ``cn``: four-qubit multipartite concurrence (d=1 only).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import measures
from .errors import BadDims, BadPartition
from .states import PARTIES, FourPartyState, PartitionSpec, build_state, reduced_density

PRESETS = (
    "cc",
    "rr",
    "c1r1",
    "c1r2",
    "c1r1_vs_c2r2",
    "c1r2_vs_c2r1",
    "c1_vs_rest",
    "r1_vs_rest",
    "cn",
)
_ALIASES = {"cc": "c1c2", "rr": "r1r2"}
_PARTY_RE = re.compile(r"(c1|c2|r1|r2)")


@dataclass(frozen=True)
class SeriesSpec:
    label: str
    kind: str
    partition: Optional[PartitionSpec]

    @property
    def name(self) -> str:
        """CSV column name."""
        if self.kind == "multipartite_cn":
            return "multipartite_cn"
        return f"{self.kind}_{self.label}"

    @property
    def threshold(self) -> float:
        """Value at or below which the series counts as unentangled."""
        return 1.0 if self.kind == "lboe" else 0.0


def _split_parties(text: str) -> tuple[str, ...]:
    parts = _PARTY_RE.findall(text)
    if "".join(parts) != text or not parts:
        raise BadPartition(f"cannot parse parties from {text!r}; use names from {PARTIES}")
    if len(set(parts)) != len(parts):
        raise BadPartition(f"party listed twice in {text!r}")
    return tuple(parts)


def parse_series(token: str, d: int, measure: str = "auto") -> SeriesSpec:
    """Turn a preset or generic token into a :class:`SeriesSpec` for cutoff ``d``.

    ``measure`` may force ``"lboe"`` (or ``"concurrence"`` when ``d == 1``)
    on a two-party reduced series; bipartitions and ``cn`` ignore it.
    """
    token = token.strip()
    if measure not in ("auto", "lboe", "concurrence"):
        raise BadPartition(f"unknown measure {measure!r}")
    if token == "cn":
        if d != 1:
            raise BadDims("the 'cn' series (multipartite concurrence) requires d=1")
        return SeriesSpec("cn", "multipartite_cn", None)
    if "_vs_" in token:
        left, right = token.split("_vs_", 1)
        side_a = PartitionSpec.of(*_split_parties(left))
        if right != "rest":
            side_b = PartitionSpec.of(*_split_parties(right))
            if side_b != side_a.complement():
                raise BadPartition(f"{right!r} is not the complement of {left!r}")
        return SeriesSpec(token, "i_concurrence", side_a)
    parties = _split_parties(_ALIASES.get(token, token))
    if len(parties) != 2:
        raise BadPartition(f"{token!r}: a reduced pair needs exactly two parties")
    kind = "concurrence" if d == 1 else "lboe"
    if measure == "lboe":
        kind = "lboe"
    elif measure == "concurrence":
        if d != 1:
            raise BadDims("two-qubit concurrence requires d=1")
        kind = "concurrence"
    return SeriesSpec(token, kind, PartitionSpec.of(*parties))


def evaluate(spec: SeriesSpec, state: FourPartyState) -> float:
    if spec.kind == "multipartite_cn":
        return measures.multipartite_cn(state)
    if spec.kind == "i_concurrence":
        return measures.i_concurrence(state, spec.partition)
    rho = reduced_density(state, spec.partition)
    if spec.kind == "concurrence":
        return measures.concurrence_two_qubit(rho)
    return measures.lboe(rho)


def measure_function(spec: SeriesSpec, alphas, kappa: float = 1.0) -> Callable[[float], float]:
    """``t -> value`` for the initial amplitudes ``alphas``."""
    alphas = list(alphas)

    def f(t: float) -> float:
        return evaluate(spec, build_state(alphas, t, kappa))

    return f


def sweep(alphas, specs: Sequence[SeriesSpec], times, kappa: float = 1.0) -> np.ndarray:
    """Table of shape ``(len(times), len(specs))``; one state is built per time."""
    alphas = list(alphas)
    out = np.empty((len(times), len(specs)))
    for i, t in enumerate(times):
        state = build_state(alphas, float(t), kappa)
        for j, spec in enumerate(specs):
            out[i, j] = evaluate(spec, state)
    return out
