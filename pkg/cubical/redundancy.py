"""
Redundancy oracle for 3-cubes.

A cube is redundant when its closure collapses onto the contact complex, the
union of the closure intersections with the present neighbor cubes. The test
runs an exhaustive free-face collapse search over the 27 cells of the closed
cube and is memoized per 26-bit neighbor mask. A fully materialized table can
be built and loaded instead of the lazy memo.
"""

import itertools
import logging
import threading
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple, Union

import numpy as np

from cubical.lattice import NEIGHBOR_OFFSETS, OFFSET_BIT
from pipeline.errors import ComplexError

logger = logging.getLogger(__name__)

MASK_BITS = len(NEIGHBOR_OFFSETS)
MASK_COUNT = 1 << MASK_BITS
TABLE_HEADER = b"CUBE3-REDUNDANCY v1"

# Local cell i = a*9 + b*3 + c for Khalimsky coordinates (a, b, c) in {0,1,2}^3
# of the closed cube; cell 13 is the cube itself.
LOCAL_CELLS: Tuple[Tuple[int, int, int], ...] = tuple(
    itertools.product(range(3), repeat=3)
)
FULL_CLOSURE = (1 << len(LOCAL_CELLS)) - 1


def _local_index(coords: Tuple[int, ...]) -> int:
    return coords[0] * 9 + coords[1] * 3 + coords[2]


def _local_facets(coords: Tuple[int, int, int]) -> List[int]:
    facets = []
    for axis, c in enumerate(coords):
        if c == 1:
            for shifted in (0, 2):
                facet = list(coords)
                facet[axis] = shifted
                facets.append(_local_index(facet))
    return facets


LOCAL_DIMENSION: Tuple[int, ...] = tuple(
    sum(1 for c in coords if c == 1) for coords in LOCAL_CELLS
)
LOCAL_COFACETS: Tuple[Tuple[int, ...], ...] = tuple(
    tuple(
        j for j, other in enumerate(LOCAL_CELLS) if i in _local_facets(other)
    )
    for i in range(len(LOCAL_CELLS))
)


def _contact_bits(offset: Tuple[int, int, int]) -> int:
    allowed = [(2,) if d == 1 else (0,) if d == -1 else (0, 1, 2) for d in offset]
    bits = 0
    for coords in itertools.product(*allowed):
        bits |= 1 << _local_index(coords)
    return bits


OFFSET_CONTACT: Tuple[int, ...] = tuple(_contact_bits(d) for d in NEIGHBOR_OFFSETS)


def contact_complex(mask: int) -> int:
    """Bitmask of local cells shared with at least one masked neighbor."""
    contact = 0
    bit = 0
    while mask:
        if mask & 1:
            contact |= OFFSET_CONTACT[bit]
        mask >>= 1
        bit += 1
    return contact


def local_euler(state: int) -> int:
    total = 0
    for i in range(len(LOCAL_CELLS)):
        if state >> i & 1:
            total += -1 if LOCAL_DIMENSION[i] & 1 else 1
    return total


def _collapses_onto(state: int, target: int, failed: Set[int]) -> bool:
    if state == target:
        return True
    if state in failed:
        return False
    for tau in range(len(LOCAL_CELLS)):
        bit = 1 << tau
        if not state & bit or target & bit:
            continue
        cofaces = [s for s in LOCAL_COFACETS[tau] if state >> s & 1]
        if len(cofaces) != 1:
            continue
        if _collapses_onto(state & ~bit & ~(1 << cofaces[0]), target, failed):
            return True
    failed.add(state)
    return False


def search(mask: int) -> bool:
    """Uncached collapse search; the closed cube versus its contact complex."""
    contact = contact_complex(mask)
    # A collapse preserves the Euler characteristic and the closed cube has 1.
    if local_euler(contact) != 1:
        return False
    return _collapses_onto(FULL_CLOSURE, contact, set())


Symmetry = Tuple[Tuple[int, int, int], Tuple[int, int, int]]

CUBE_SYMMETRIES: List[Symmetry] = [
    (perm, signs)
    for perm in itertools.permutations(range(3))
    for signs in itertools.product((1, -1), repeat=3)
]


def transform_offset(
    offset: Tuple[int, int, int], symmetry: Symmetry
) -> Tuple[int, int, int]:
    perm, signs = symmetry
    return (
        signs[0] * offset[perm[0]],
        signs[1] * offset[perm[1]],
        signs[2] * offset[perm[2]],
    )


_SYMMETRY_BIT_MAPS: List[Tuple[int, ...]] = [
    tuple(OFFSET_BIT[transform_offset(d, sym)] for d in NEIGHBOR_OFFSETS)
    for sym in CUBE_SYMMETRIES
]


def transform_mask(mask: int, symmetry_index: int) -> int:
    """Image of a neighbor mask under CUBE_SYMMETRIES[symmetry_index]."""
    bit_map = _SYMMETRY_BIT_MAPS[symmetry_index]
    image = 0
    for bit in range(MASK_BITS):
        if mask >> bit & 1:
            image |= 1 << bit_map[bit]
    return image


def canonical_mask(mask: int) -> int:
    return min(transform_mask(mask, i) for i in range(len(CUBE_SYMMETRIES)))


class RedundancyOracle:
    """
    Memoized redundancy test, safe to share between threads.

    When a materialized table is supplied it answers every query and the memo
    stays empty.
    """

    def __init__(self, table: Optional[np.ndarray] = None):
        self._memo: Dict[int, bool] = {}
        self._lock = threading.Lock()
        self._table = table

    @classmethod
    def from_table_file(cls, path: Union[str, Path]) -> "RedundancyOracle":
        return cls(load_table(path))

    def __len__(self) -> int:
        with self._lock:
            return len(self._memo)

    def is_redundant(self, mask: int) -> bool:
        if not 0 <= mask < MASK_COUNT:
            raise ComplexError(f"Neighbor mask out of range: {mask}")
        if self._table is not None:
            return bool(self._table[mask >> 3] >> (mask & 7) & 1)

        with self._lock:
            cached = self._memo.get(mask)
        if cached is not None:
            return cached

        canonical = canonical_mask(mask)
        with self._lock:
            cached = self._memo.get(canonical)
        if cached is None:
            cached = search(canonical)
            logger.debug(f"Redundancy of mask {canonical:#09x}: {cached}")

        with self._lock:
            self._memo[canonical] = cached
            self._memo[mask] = cached
        return cached


_default_oracle: Optional[RedundancyOracle] = None
_default_lock = threading.Lock()


def default_oracle() -> RedundancyOracle:
    global _default_oracle
    with _default_lock:
        if _default_oracle is None:
            _default_oracle = RedundancyOracle()
        return _default_oracle


def configure_default_oracle(table_path: Optional[Union[str, Path]]) -> RedundancyOracle:
    """Replace the process-wide oracle, table-backed when a path is given."""
    global _default_oracle
    oracle = (
        RedundancyOracle.from_table_file(table_path)
        if table_path
        else RedundancyOracle()
    )
    with _default_lock:
        _default_oracle = oracle
    logger.info(
        f"Redundancy oracle configured ({'table ' + str(table_path) if table_path else 'lazy memo'})"
    )
    return oracle


def is_redundant(mask: int, oracle: Optional[RedundancyOracle] = None) -> bool:
    """True iff a cube with this neighbor mask collapses onto its contact complex."""
    return (oracle or default_oracle()).is_redundant(mask)


def _table_chunk(start: int, stop: int) -> Tuple[int, bytes]:
    oracle = RedundancyOracle()
    bits = np.fromiter(
        (oracle.is_redundant(mask) for mask in range(start, stop)),
        dtype=bool,
        count=stop - start,
    )
    return start, np.packbits(bits, bitorder="little").tobytes()


def build_table(
    out_path: Union[str, Path],
    jobs: int = 1,
    chunk_size: int = 1 << 18,
    limit: int = MASK_COUNT,
) -> Path:
    """
    Materialize the redundancy bit for every mask below `limit` and write the
    table file. Bits past `limit` are left zero, so a partial table is only
    useful for testing.
    """
    if chunk_size % 8:
        raise ValueError("chunk_size must be a multiple of 8")
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    packed = bytearray(MASK_COUNT // 8)
    ranges = [(s, min(s + chunk_size, limit)) for s in range(0, limit, chunk_size)]
    logger.info(f"Building redundancy table: {len(ranges)} chunks, {jobs} workers")

    done = 0
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_table_chunk, start, stop) for start, stop in ranges]
        for future in as_completed(futures):
            start, chunk = future.result()
            packed[start // 8 : start // 8 + len(chunk)] = chunk
            done += 1
            if done % 16 == 0 or done == len(ranges):
                logger.info(f"Redundancy table progress: {done}/{len(ranges)} chunks")

    with open(out_path, "wb") as f:
        f.write(TABLE_HEADER + b"\n")
        f.write(bytes(packed))
    logger.info(f"Redundancy table written to {out_path}")
    return out_path


def load_table(path: Union[str, Path]) -> np.ndarray:
    data = Path(path).read_bytes()
    header, sep, payload = data.partition(b"\n")
    if not sep or header.strip() != TABLE_HEADER:
        raise ComplexError(f"{path} is not a redundancy table (bad header)")
    if len(payload) != MASK_COUNT // 8:
        raise ComplexError(
            f"{path} has {len(payload)} payload bytes, expected {MASK_COUNT // 8}"
        )
    return np.frombuffer(payload, dtype=np.uint8)
