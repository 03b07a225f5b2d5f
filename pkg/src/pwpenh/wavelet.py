"""Daubechies-10 filter pair and the perceptual wavelet packet transform.

Frames are 512 samples at 8 kHz. The default tree has 24 leaves with
bandwidths of 62.5, 125, 250 and 500 Hz, fine at low frequency and coarse
at high frequency. All convolutions use periodic extension, so analysis is
an orthonormal change of basis and synthesis is its transpose.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import comb, sqrt

import numpy as np

from . import kernels
from .errors import BadFrameLength, InvalidTree, ShapeMismatch

FRAME_LEN = 512
SAMPLE_RATE = 8000
MAX_DEPTH = 6
N_SUBBANDS = 24
VANISHING_MOMENTS = 10

# (depth, first frequency slot, last frequency slot + 1) for the default tree
_DEFAULT_LAYOUT = (
    (6, 0, 10),   # 0-625 Hz in 62.5 Hz slots
    (5, 5, 12),   # 625-1500 Hz in 125 Hz slots
    (4, 6, 10),   # 1500-2500 Hz in 250 Hz slots
    (3, 5, 8),    # 2500-4000 Hz in 500 Hz slots
)


@dataclass(frozen=True)
class FilterPair:
    decomposition_lowpass: np.ndarray
    decomposition_highpass: np.ndarray
    reconstruction_lowpass: np.ndarray
    reconstruction_highpass: np.ndarray

    @property
    def length(self):
        return self.decomposition_lowpass.size


def _daubechies_lowpass(p):
    # Spectral factorisation: |H|^2 = cos^{2p}(w/2) P(sin^2(w/2)); keep the
    # minimum-phase root of each z + 1/z = 2 - 4y pair.
    poly_y = [comb(p - 1 + k, k) for k in range(p)]
    y_roots = np.roots(poly_y[::-1])
    z_roots = []
    for y in y_roots:
        pair = np.roots([1.0, -(2.0 - 4.0 * y), 1.0])
        z_roots.append(pair[np.argmin(np.abs(pair))])
    roots = np.concatenate([np.full(p, -1.0), np.asarray(z_roots)])
    h = np.real(np.poly(roots))
    return h * (sqrt(2.0) / h.sum())


@lru_cache(maxsize=None)
def qmf_filters():
    """Return the db10 quadrature-mirror filter pair (20 taps each).

    The highpass filter follows the alternating-flip relation
    ``g[n] = (-1)**n * h[L-1-n]``.
    """
    rec_lo = _daubechies_lowpass(VANISHING_MOMENTS)
    n = np.arange(rec_lo.size)
    rec_hi = ((-1.0) ** n) * rec_lo[::-1]
    pair = FilterPair(
        decomposition_lowpass=rec_lo[::-1].copy(),
        decomposition_highpass=rec_hi[::-1].copy(),
        reconstruction_lowpass=rec_lo,
        reconstruction_highpass=rec_hi,
    )
    for arr in (pair.decomposition_lowpass, pair.decomposition_highpass,
                pair.reconstruction_lowpass, pair.reconstruction_highpass):
        arr.setflags(write=False)
    return pair


@dataclass(frozen=True)
class Leaf:
    depth: int
    node_index: int  # frequency-ordered position among the 2**depth nodes
    band: tuple

    @property
    def n_coeffs(self):
        return FRAME_LEN >> self.depth

    @property
    def natural_index(self):
        """Position in the natural (Paley) filter-bank ordering."""
        # inverse Gray code of the frequency slot
        n, shift = self.node_index, self.node_index >> 1
        while shift:
            n ^= shift
            shift >>= 1
        return n


def _leaf(depth, node):
    width = (SAMPLE_RATE / 2) / (1 << depth)
    return Leaf(depth, node, (node * width, (node + 1) * width))


@dataclass(frozen=True)
class PwpTree:
    leaves: tuple

    @property
    def depths(self):
        return np.array([lf.depth for lf in self.leaves])

    @property
    def lengths(self):
        return np.array([lf.n_coeffs for lf in self.leaves])

    @property
    def offsets(self):
        """Start index of each subband in the packed 512-vector (plus end)."""
        return np.concatenate([[0], np.cumsum(self.lengths)])

    def __len__(self):
        return len(self.leaves)


def _validate_leaves(leaves):
    if len(leaves) != N_SUBBANDS:
        raise InvalidTree(f"expected {N_SUBBANDS} leaves, got {len(leaves)}")
    unit = 1 << MAX_DEPTH
    spans = []
    for lf in leaves:
        if not 0 <= lf.depth <= MAX_DEPTH:
            raise InvalidTree(f"leaf depth {lf.depth} outside [0, {MAX_DEPTH}]")
        if not 0 <= lf.node_index < (1 << lf.depth):
            raise InvalidTree(f"node index {lf.node_index} invalid at depth {lf.depth}")
        size = unit >> lf.depth
        spans.append((lf.node_index * size, (lf.node_index + 1) * size, lf))
    spans.sort(key=lambda s: s[0])
    cursor = 0
    for start, stop, lf in spans:
        if start != cursor:
            kind = "gap" if start > cursor else "overlap"
            raise InvalidTree(f"{kind} in leaf partition at slot {cursor}")
        cursor = stop
    if cursor != unit:
        raise InvalidTree("leaves do not cover the full band")
    widths = [stop - start for start, stop, _ in spans]
    if any(b < a for a, b in zip(widths, widths[1:])):
        raise InvalidTree("bandwidths must be non-decreasing with frequency")
    return tuple(s[2] for s in spans)


def build_perceptual_tree(leaves=None):
    """Build a PwpTree.

    ``leaves`` is ``None`` (or ``"default"``) for the mel-like default tree,
    or a sequence of ``(depth, node_index)`` pairs with frequency-ordered node
    indices. Aligned dyadic intervals that tile the band without gap or
    overlap always form a valid pruned binary tree, so checking the tiling is
    sufficient.
    """
    if leaves is None or (isinstance(leaves, str) and leaves == "default"):
        pairs = [(d, node) for d, lo, hi in _DEFAULT_LAYOUT for node in range(lo, hi)]
    else:
        try:
            pairs = [(int(d), int(node)) for d, node in leaves]
        except (TypeError, ValueError) as exc:
            raise InvalidTree(f"malformed leaf list: {exc}") from None
    return PwpTree(_validate_leaves([_leaf(d, node) for d, node in pairs]))


@lru_cache(maxsize=8)
def _plan(tree):
    # internal nodes by depth, each as a (frequency slot) list
    internal = set()
    for lf in tree.leaves:
        d, node = lf.depth, lf.node_index
        while d > 0:
            node = _parent(node)
            d -= 1
            internal.add((d, node))
    return sorted(internal)


def _parent(node):
    return node >> 1


def _children(node):
    # Highpass filtering mirrors the spectrum, so odd slots are stored
    # inverted and their lowpass child is the upper half.
    odd = node & 1
    return 2 * node + odd, 2 * node + 1 - odd


@dataclass
class SubbandSet:
    """Per-frame coefficients of every leaf, in frequency order.

    ``packed`` has shape ``(..., 512)``; subband ``k`` (0-based) occupies
    ``packed[..., offsets[k]:offsets[k+1]]``.
    """
    packed: np.ndarray
    tree: PwpTree

    def __getitem__(self, k):
        off = self.tree.offsets
        return self.packed[..., off[k]:off[k + 1]]

    def __len__(self):
        return len(self.tree)

    @property
    def coeffs(self):
        return [self[k] for k in range(len(self.tree))]

    @classmethod
    def from_list(cls, coeffs, tree):
        lengths = tree.lengths
        if len(coeffs) != len(lengths):
            raise ShapeMismatch(f"expected {len(lengths)} subbands, got {len(coeffs)}")
        arrs = [np.asarray(c, dtype=np.float64) for c in coeffs]
        for k, (arr, n) in enumerate(zip(arrs, lengths)):
            if arr.shape[-1] != n:
                raise ShapeMismatch(f"subband {k + 1} has {arr.shape[-1]} coefficients, tree expects {n}")
        return cls(np.concatenate(arrs, axis=-1), tree)


def pwp_analyze(frame, tree=None):
    """Forward transform of one frame (512,) or a batch (F, 512)."""
    tree = tree or build_perceptual_tree()
    x = np.asarray(frame, dtype=np.float64)
    if x.shape[-1] != FRAME_LEN or x.ndim not in (1, 2):
        raise BadFrameLength(f"frame must have {FRAME_LEN} samples, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("frame contains non-finite samples")
    single = x.ndim == 1
    x2 = x[None, :] if single else x
    filt = qmf_filters()
    h, g = filt.decomposition_lowpass[::-1].copy(), filt.decomposition_highpass[::-1].copy()

    nodes = {(0, 0): x2}
    for d, node in _plan(tree):
        lo, hi = kernels.analysis_step(nodes.pop((d, node)), h, g)
        c_lo, c_hi = _children(node)
        nodes[(d + 1, c_lo)] = lo
        nodes[(d + 1, c_hi)] = hi
    packed = np.concatenate([nodes[(lf.depth, lf.node_index)] for lf in tree.leaves], axis=1)
    return SubbandSet(packed[0] if single else packed, tree)


def pwp_synthesize(subbands, tree=None):
    """Inverse transform; accepts a SubbandSet or a list of per-leaf arrays."""
    if isinstance(subbands, SubbandSet):
        tree = tree or subbands.tree
        if subbands.tree != tree:
            raise ShapeMismatch("subband set was produced with a different tree")
        packed = np.asarray(subbands.packed, dtype=np.float64)
        if packed.shape[-1] != FRAME_LEN:
            raise ShapeMismatch(f"packed coefficients must have {FRAME_LEN} entries")
    else:
        tree = tree or build_perceptual_tree()
        packed = SubbandSet.from_list(subbands, tree).packed
    single = packed.ndim == 1
    p2 = packed[None, :] if single else packed
    filt = qmf_filters()
    h, g = filt.decomposition_lowpass[::-1].copy(), filt.decomposition_highpass[::-1].copy()

    off = tree.offsets
    nodes = {(lf.depth, lf.node_index): p2[:, off[k]:off[k + 1]]
             for k, lf in enumerate(tree.leaves)}
    for d, node in reversed(_plan(tree)):
        c_lo, c_hi = _children(node)
        nodes[(d, node)] = kernels.synthesis_step(
            nodes.pop((d + 1, c_lo)), nodes.pop((d + 1, c_hi)), h, g)
    out = nodes[(0, 0)]
    return out[0] if single else out
