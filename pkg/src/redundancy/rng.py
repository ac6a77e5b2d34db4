"""Deterministic uniform streams built on counter-based Philox.

Every stream is a pure function of its (seed, stream) key, and any aligned
offset of a stream can be reached directly without generating the skipped
values. Philox-4x64 emits four 64-bit words per counter block and one word
is consumed per double, so offsets must be multiples of four words.
"""
from __future__ import annotations

import numpy as np
from numpy.random import Generator, Philox

_MASK64 = (1 << 64) - 1
WORDS_PER_BLOCK = 4


def _key(seed: int, stream: int) -> int:
    return ((int(seed) & _MASK64) << 64) | (int(stream) & _MASK64)


class RandomStream:
    """Seeded stream of uniforms on (0, 1].

    Draws exclude 0 so that log- and power-based inverse transforms are
    always finite. One 64-bit word is consumed per value.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        self._gen = Generator(Philox(key=_key(seed, stream)))

    def uniform(self) -> float:
        """One uniform draw from (0, 1]."""
        return 1.0 - float(self._gen.random())

    def uniforms(self, shape) -> np.ndarray:
        """Array of uniforms on (0, 1]."""
        return 1.0 - self._gen.random(shape)


def uniform_block(seed: int, word_offset: int, count: int, stream: int = 0) -> np.ndarray:
    """Uniforms on (0, 1] at a fixed word offset of the (seed, stream) stream.

    ``word_offset`` must be a multiple of ``WORDS_PER_BLOCK``. The returned
    block is identical to positions [word_offset, word_offset + count) of the
    stream a fresh ``RandomStream(seed, stream)`` would produce, regardless
    of how the stream is chunked elsewhere.
    """
    if word_offset % WORDS_PER_BLOCK:
        raise ValueError(f"word_offset must be a multiple of {WORDS_PER_BLOCK}")
    bg = Philox(key=_key(seed, stream))
    if word_offset:
        bg.advance(word_offset // WORDS_PER_BLOCK)
    return 1.0 - Generator(bg).random(count)
