"""Counter-addressable random number streams.

Every simulation in this package draws from an :class:`RngStream`, a
splitmix64-style generator whose output is a pure function of
``(master_seed, stream_id, draw_counter)``.  The n-th draw of a stream is

    mix64(stream_key + (n + 1) * GOLDEN)        (all arithmetic mod 2**64)

where ``mix64`` is the standard splitmix64 finalizer (Steele/Lea/Vigna) and
``stream_key = mix64(master_seed + (stream_id + 1) * GOLDEN)``, i.e. stream
keys are themselves entries of the master seed's own output sequence.  Two
streams collide only if their keys land within a few multiples of GOLDEN of
each other, a ~2**-64 event per pair, so replications indexed by stream_id
behave as statistically independent sequences.

Pure integer arithmetic, no platform-dependent state: the same triple
yields the same output on every platform and Python build.
"""

from __future__ import annotations

from dataclasses import dataclass, field

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
# 1 / 2**53, scales a 53-bit integer into [0, 1)
_INV53 = 1.0 / (1 << 53)


def _mix64(z: int) -> int:
    """splitmix64 finalizer: bijective avalanche on 64-bit words."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass
class RngStream:
    """One replication's private random stream.

    master_seed identifies the experiment, stream_id the replication within
    it, draw_counter the position in the stream.  Identical triples produce
    identical draws; the counter advances by one per raw 64-bit word drawn.
    """

    master_seed: int
    stream_id: int = 0
    draw_counter: int = 0
    _key: int = field(init=False, repr=False)

    def __post_init__(self):
        for name in ("master_seed", "stream_id", "draw_counter"):
            v = getattr(self, name)
            if not isinstance(v, int) or not 0 <= v <= _MASK64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")
        self._key = _mix64((self.master_seed + (self.stream_id + 1) * _GOLDEN) & _MASK64)

    def next_u64(self) -> int:
        """Next raw 64-bit word; advances the counter by exactly 1."""
        self.draw_counter += 1
        return _mix64((self._key + self.draw_counter * _GOLDEN) & _MASK64)

    def next_uniform(self) -> float:
        """Uniform float in [0, 1) with 53-bit resolution; one word consumed."""
        return (self.next_u64() >> 11) * _INV53

    def next_index(self, k: int) -> int:
        """Uniform integer in {0, ..., k-1}.

        Rejection sampling on raw words: no modulo bias for any k up to
        2**64.  Consumes a variable (almost always 1) number of words.
        """
        if not isinstance(k, int) or k <= 0:
            raise ValueError(f"k must be a positive integer, got {k!r}")
        # largest multiple of k that fits in 64 bits; words above it are rejected
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % k

    def next_bernoulli(self, p: float) -> bool:
        """True with probability p; one word consumed regardless of outcome."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p!r}")
        return self.next_uniform() < p
