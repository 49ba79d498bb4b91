"""Multimode coherent fields.

A coherent pulse train is fully described by one complex amplitude per
(polarization, arrival time, port) mode.  Amplitudes are in units of
sqrt(mean photon number), so ``|a|^2`` is optical power per pulse.
"""
from __future__ import annotations

import math
from collections.abc import Mapping

from .state import ModeLabel, ModeVector, StructureError

Slot = tuple[int, str]


class CoherentField(ModeVector):
    """Product of two-mode coherent states ``|a_H, a_V>`` indexed by (delay, port)."""

    __slots__ = ()

    def __init__(self, terms=()):
        super().__init__(terms)
        if self.entangled:
            raise StructureError("coherent fields carry no Eve index")

    @classmethod
    def from_slots(cls, slots: Mapping[Slot, tuple[complex, complex]]) -> CoherentField:
        terms = {}
        for (delay, port), (a_h, a_v) in slots.items():
            terms[ModeLabel("H", delay, port)] = a_h
            terms[ModeLabel("V", delay, port)] = a_v
        return cls(terms)

    @classmethod
    def single(cls, alpha: complex, beta: complex, port: str = "in", delay: int = 0) -> CoherentField:
        return cls.from_slots({(delay, port): (alpha, beta)})

    def slots(self) -> dict[Slot, tuple[complex, complex]]:
        out: dict[Slot, list[complex]] = {}
        for label, amp in self.items():
            pair = out.setdefault((label.delay, label.port), [0j, 0j])
            pair[0 if label.pol == "H" else 1] = amp
        return {k: (v[0], v[1]) for k, v in sorted(out.items())}

    def slot(self, delay: int, port: str) -> tuple[complex, complex]:
        return (self.amplitude(ModeLabel("H", delay, port)), self.amplitude(ModeLabel("V", delay, port)))

    def power(self, delay: int | None = None, port: str | None = None) -> float:
        """Total power, optionally restricted to one time slot and/or port."""
        return math.fsum(
            abs(a) ** 2
            for k, a in self.items()
            if (delay is None or k.delay == delay) and (port is None or k.port == port)
        )

    def drop_ports(self, *ports: str) -> CoherentField:
        return self.restrict(lambda k: k.port not in ports)
