"""Projective multi-resolution analyses in Hilbert modules, made concrete.

Subpackages by setting:

- ``laurent``: Laurent polynomial arithmetic for circle functions
- ``circle``: the correspondence for ``z -> z^N``, filters and filter banks
- ``frames``: tensor words, level embeddings and truncated limit frames
- ``cascade``: scaling functions, dilation and module bases on the line
- ``graph``: path-space modules of finite directed graphs
- ``torus``: the quasi-periodic modules ``Y(q, a)`` over the 2-torus
"""

__version__ = "0.1.0"
