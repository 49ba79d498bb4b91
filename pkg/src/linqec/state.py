"""Single-photon state vectors over labeled optical modes.

A mode is identified by its polarization, its arrival time (in units of the
interferometer imbalance), the spatial port it travels in and, optionally,
the component of Eve's probe qubit it is entangled with.  States are
immutable; every operation returns a new value.
"""
from __future__ import annotations

import math
from collections.abc import Callable, Hashable, Iterable, Mapping
from typing import NamedTuple, TypeVar

import numpy as np

PRUNE_TOL = 1e-15
NORM_TOL = 1e-9
DEFAULT_TOL = 1e-12

POLS = ("H", "V")
EVE_COMPONENTS = ("plus", "minus")
MAX_DELAY = 3  # deepest setup (passive corrector) reaches 2; time multiplexing adds 1


class StructureError(ValueError):
    """States with and without an Eve index were mixed."""


class NormalizationError(ValueError):
    """An input state or probe was not normalized."""


class PartitionError(ValueError):
    """A measurement partition does not cover every term exactly once."""


_tuple_new = tuple.__new__


class ModeLabel(NamedTuple):
    pol: str
    delay: int = 0
    port: str = "in"
    eve: str | None = None

    # NamedTuple._replace is slow enough to dominate Monte Carlo runs.
    def with_pol(self, pol: str) -> ModeLabel:
        return _tuple_new(ModeLabel, (pol, self[1], self[2], self[3]))

    def with_delay(self, delay: int) -> ModeLabel:
        return _tuple_new(ModeLabel, (self[0], delay, self[2], self[3]))

    def with_port(self, port: str) -> ModeLabel:
        return _tuple_new(ModeLabel, (self[0], self[1], port, self[3]))

    def with_eve(self, eve: str | None) -> ModeLabel:
        return _tuple_new(ModeLabel, (self[0], self[1], self[2], eve))

    @property
    def flipped(self) -> ModeLabel:
        return _tuple_new(ModeLabel, ("V" if self[0] == "H" else "H", self[1], self[2], self[3]))

    def __str__(self) -> str:
        s = f"{self.pol}[t={self.delay}, port={self.port}"
        if self.eve is not None:
            s += f", eve={self.eve}"
        return s + "]"


def _check_label(label: ModeLabel) -> None:
    if label.pol not in POLS:
        raise ValueError(f"unknown polarization {label.pol!r}")
    if not 0 <= label.delay <= MAX_DELAY:
        raise ValueError(f"delay {label.delay} outside the pipeline depth")
    if label.eve is not None and label.eve not in EVE_COMPONENTS:
        raise ValueError(f"unknown Eve component {label.eve!r}")


_M = TypeVar("_M", bound="ModeVector")


class ModeVector:
    """Complex amplitudes indexed by :class:`ModeLabel`.

    Shared base of :class:`PhotonState` (probability amplitudes) and
    :class:`~linqec.field.CoherentField` (coherent amplitudes).  Passive linear
    optics transforms both in exactly the same way, which is why the component
    functions are written once against this class.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[ModeLabel, complex] | Iterable[tuple[ModeLabel, complex]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ModeLabel, complex] = {}
        for label, amp in items:
            if not isinstance(label, ModeLabel):
                label = ModeLabel(*label)
            _check_label(label)
            acc[label] = acc.get(label, 0j) + complex(amp)
        self._terms = {k: v for k, v in acc.items() if abs(v) >= PRUNE_TOL}
        self._check_structure()

    @classmethod
    def _raw(cls: type[_M], terms: dict[ModeLabel, complex]) -> _M:
        # Fast path for component functions: labels already valid, only prune.
        obj = cls.__new__(cls)
        obj._terms = {k: v for k, v in terms.items() if abs(v) >= PRUNE_TOL}
        return obj

    def _check_structure(self) -> None:
        flags = {label.eve is None for label in self._terms}
        if len(flags) > 1:
            raise StructureError("either every term carries an Eve component or none does")

    @property
    def terms(self) -> Mapping[ModeLabel, complex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def labels(self) -> list[ModeLabel]:
        return list(self._terms)

    def amplitude(self, label: ModeLabel) -> complex:
        return self._terms.get(label, 0j)

    @property
    def entangled(self) -> bool:
        return any(label.eve is not None for label in self._terms)

    def norm2(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self._terms.values())

    def ports(self) -> set[str]:
        return {label.port for label in self._terms}

    def delays(self) -> set[int]:
        return {label.delay for label in self._terms}

    def relabel(self: _M, fn: Callable[[ModeLabel], ModeLabel]) -> _M:
        """Map every label through ``fn``; colliding labels add amplitudes."""
        out: dict[ModeLabel, complex] = {}
        for label, amp in self._terms.items():
            new = fn(label)
            out[new] = out[new] + amp if new in out else amp
        if len(out) < len(self._terms):  # collisions may cancel
            return type(self)._raw(out)
        obj = type(self).__new__(type(self))
        obj._terms = out
        return obj

    def scale(self: _M, factor: complex) -> _M:
        return type(self)._raw({k: v * factor for k, v in self._terms.items()})

    def restrict(self: _M, predicate: Callable[[ModeLabel], bool]) -> _M:
        return type(self)._raw({k: v for k, v in self._terms.items() if predicate(k)})

    def __add__(self: _M, other: _M) -> _M:
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0j) + v
        res = type(self)._raw(out)
        res._check_structure()
        return res

    def __eq__(self, other) -> bool:
        return type(other) is type(self) and self._terms == other._terms

    def __hash__(self):
        return hash((type(self), frozenset(self._terms.items())))

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __repr__(self) -> str:
        body = " + ".join(f"({a:.6g})|{k}>" for k, a in self._terms.items())
        return f"{type(self).__name__}({body or '0'})"

    def to_records(self) -> list[dict]:
        return [
            {"pol": k.pol, "delay": k.delay, "port": k.port, "eve": k.eve, "re": a.real, "im": a.imag}
            for k, a in self._terms.items()
        ]


class PhotonState(ModeVector):
    """A single excitation spread over labeled modes."""

    __slots__ = ()

    def __init__(self, terms=()):
        super().__init__(terms)
        if not self._terms:
            raise ValueError("a photon state needs at least one nonzero amplitude")
        if self.norm2() > 1 + 1e-12:
            raise NormalizationError(f"state norm^2 {self.norm2():.15g} exceeds 1")

    def normalized(self) -> PhotonState:
        return self.scale(1 / math.sqrt(self.norm2()))


def new_qubit(alpha: complex, beta: complex, port: str = "in") -> PhotonState:
    """Return ``alpha|H> + beta|V>`` at delay 0 on ``port``."""
    n2 = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(n2 - 1) > NORM_TOL:
        raise NormalizationError(f"|alpha|^2 + |beta|^2 = {n2!r}, expected 1")
    return PhotonState({ModeLabel("H", 0, port): alpha, ModeLabel("V", 0, port): beta})


def _require_same_structure(a: ModeVector, b: ModeVector) -> None:
    if a.entangled != b.entangled:
        raise StructureError("cannot compare a state carrying an Eve index with one that does not")


def overlap(a: ModeVector, b: ModeVector) -> complex:
    """Inner product <a|b>."""
    _require_same_structure(a, b)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for label, amp in small.items():
        other = large.amplitude(label)
        if other:
            total += amp.conjugate() * other if small is a else other.conjugate() * amp
    return total


def fidelity(a: ModeVector, b: ModeVector) -> float:
    """|<a|b>|^2 / (<a|a><b|b>)."""
    return abs(overlap(a, b)) ** 2 / (a.norm2() * b.norm2())


def equal_up_to_global_phase(a: ModeVector, b: ModeVector, tol: float = DEFAULT_TOL) -> bool:
    if a.entangled != b.entangled:
        return False
    return abs(overlap(a, b)) ** 2 >= (1 - tol) * a.norm2() * b.norm2()


def postselect(
    s: PhotonState, predicate: Callable[[ModeLabel], bool]
) -> tuple[float, PhotonState | None]:
    """Condition on the modes matching ``predicate``.

    Returns the probability of the event and the renormalized conditional
    state, or ``(0.0, None)`` when the event cannot happen.
    """
    kept = {k: v for k, v in s.items() if predicate(k)}
    prob = math.fsum(abs(v) ** 2 for v in kept.values())
    if prob < PRUNE_TOL**2 or not kept:
        return 0.0, None
    scale = 1 / math.sqrt(prob)
    return prob, PhotonState._raw({k: v * scale for k, v in kept.items()})


Partition = Mapping[Hashable, Callable[[ModeLabel], bool]] | Callable[[ModeLabel], Hashable]


def _cells(s: ModeVector, partition: Partition) -> dict[Hashable, list[ModeLabel]]:
    cells: dict[Hashable, list[ModeLabel]] = {}
    if isinstance(partition, Mapping):
        for cell in partition:
            cells[cell] = []
        for label in s:
            hits = [cell for cell, pred in partition.items() if pred(label)]
            if len(hits) != 1:
                raise PartitionError(f"mode {label} falls in {len(hits)} cells, expected exactly 1")
            cells[hits[0]].append(label)
    else:
        for label in s:
            cell = partition(label)
            if cell is None:
                raise PartitionError(f"mode {label} is not covered by the partition")
            cells.setdefault(cell, []).append(label)
    return cells


def cell_probabilities(s: PhotonState, partition: Partition) -> dict[Hashable, float]:
    """Born-rule probability of every cell of ``partition``."""
    return {
        cell: math.fsum(abs(s.amplitude(k)) ** 2 for k in labels)
        for cell, labels in _cells(s, partition).items()
    }


def born_sample(
    s: PhotonState, partition: Partition, rng: np.random.Generator
) -> tuple[Hashable, PhotonState]:
    """Draw one detection outcome and return ``(cell, collapsed state)``.

    ``partition`` is either a mapping ``cell -> predicate`` or a function
    mapping a label to its cell.
    """
    cells = _cells(s, partition)
    names = list(cells)
    weights = [math.fsum(abs(s.amplitude(k)) ** 2 for k in cells[c]) for c in names]
    total = math.fsum(weights)
    u = rng.random() * total
    live = [i for i, w in enumerate(weights) if w > 0]
    chosen = names[live[-1]]
    acc = 0.0
    for i in live:
        acc += weights[i]
        if u < acc:
            chosen = names[i]
            break
    members = set(cells[chosen])
    return chosen, postselect(s, lambda k: k in members)[1]


def tensor_with_eve(s: PhotonState, eve_plus: complex, eve_minus: complex) -> PhotonState:
    """Product of ``s`` with Eve's probe ``eve_plus|+> + eve_minus|->``."""
    if s.entangled:
        raise StructureError("state already carries an Eve component")
    n2 = abs(eve_plus) ** 2 + abs(eve_minus) ** 2
    if abs(n2 - 1) > NORM_TOL:
        raise NormalizationError(f"Eve probe norm^2 = {n2!r}, expected 1")
    out: dict[ModeLabel, complex] = {}
    for label, amp in s.items():
        out[label.with_eve("plus")] = amp * eve_plus
        out[label.with_eve("minus")] = amp * eve_minus
    return PhotonState._raw(out)
