"""Splittable, platform-stable random streams.

Each (seed, stream) pair keys an independent Philox counter generator.
Gaussians come from Box-Muller on its 53-bit uniforms, so the values depend
only on the key and the order of calls, never on numpy's sampler internals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MASK64 = (1 << 64) - 1


@dataclass
class RngStream:
    seed: int
    stream: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ss = np.random.SeedSequence([self.seed & _MASK64, self.stream & _MASK64])
        self._gen = np.random.Generator(np.random.Philox(ss))

    def child(self, index: int) -> "RngStream":
        """A stream keyed by (seed, index); used for per-trial streams."""
        return RngStream(self.seed, index)

    def uniform(self, shape=()) -> np.ndarray:
        """Uniform on [0, 1)."""
        return self._gen.random(shape)

    def normal(self, shape=(), scale: float = 1.0) -> np.ndarray:
        """Independent N(0, scale^2) variates by Box-Muller."""
        shape = (shape,) if isinstance(shape, int) else tuple(shape)
        size = int(np.prod(shape, dtype=int))
        m = (size + 1) // 2
        u1 = self._gen.random(m)
        u2 = self._gen.random(m)
        r = np.sqrt(-2.0 * np.log1p(-u1))
        theta = 2.0 * np.pi * u2
        z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:size]
        return scale * z.reshape(shape)
