"""Constructive core of the multi-access caching scheme.

Placement fills C caches with subfiles indexed by t-subsets of [C]; delivery
sends one XOR-coded message per (t+r)-subset; each user, identified with the
r-subset of caches it reads, peels every message whose index set contains it.
The module works symbolically (subfile identifiers) and on real bytes.

Parameters follow the usual naming: C caches, access degree r, cache
parameter t (each cache holds the fraction t/C of the library), N files.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Mapping, NamedTuple, Sequence

import numpy as np

from .combinatorics import binom, enumerate_subsets, rank_subset, validate_subset


class DemandError(ValueError):
    """A demand assignment violates the rules of the active mode."""


class DecodingError(RuntimeError):
    """A user hit a coded term it cannot cancel from its caches.

    This cannot happen for a correct placement/delivery pair, so it is raised
    loudly instead of being swallowed: it always indicates a construction bug.
    """


class SubfileId(NamedTuple):
    """Identifier of one subfile: file index i and t-subset index set T."""

    file_index: int
    index_set: tuple[int, ...]


@dataclass(frozen=True)
class SchemeParams:
    """Validated parameter tuple (C, r, t, N).

    t + r > C is permitted: the delivery phase is then empty (every user
    already reaches all subfiles of every file through its caches).
    """

    num_caches: int
    access_degree: int
    cache_param: int
    num_files: int

    def __post_init__(self) -> None:
        C, r, t, N = self.num_caches, self.access_degree, self.cache_param, self.num_files
        if C < 1:
            raise ValueError(f"num_caches must be positive, got {C}")
        if not 1 <= r <= C:
            raise ValueError(f"access_degree must satisfy 1 <= r <= {C}, got {r}")
        if not 1 <= t <= C:
            raise ValueError(f"cache_param must satisfy 1 <= t <= {C}, got {t}")
        if N < 1:
            raise ValueError(f"num_files must be positive, got {N}")

    @property
    def num_users(self) -> int:
        """Maximum population: one user per r-subset of caches."""
        return binom(self.num_caches, self.access_degree)

    @property
    def subpacketization(self) -> int:
        """Number of subfiles each file is split into."""
        return binom(self.num_caches, self.cache_param)

    @property
    def cache_fraction(self) -> Fraction:
        """Fraction of the library each single cache stores (M/N = t/C)."""
        return Fraction(self.cache_param, self.num_caches)

    def users(self) -> Iterator[tuple[int, ...]]:
        """All user identities in lexicographic order."""
        return enumerate_subsets(self.num_caches, self.access_degree)

    def subfile_index_sets(self) -> Iterator[tuple[int, ...]]:
        """All subfile index sets in lexicographic order."""
        return enumerate_subsets(self.num_caches, self.cache_param)


@dataclass(frozen=True)
class CacheContent:
    """Everything one cache stores: all subfiles whose index set names it."""

    cache_label: int
    subfiles: frozenset[SubfileId]


@dataclass(frozen=True)
class Transmission:
    """One coded message: the XOR of ``terms``, addressed by ``coded_set``.

    With every user active the term list has exactly binom(t+r, r) entries,
    one per r-subset U of the coded set, carrying W_{d_U, coded_set \\ U}.
    Terms are ordered lexicographically by the user subset they serve.
    """

    coded_set: tuple[int, ...]
    terms: tuple[SubfileId, ...]

    def user_of_term(self, term: SubfileId) -> tuple[int, ...]:
        """The user a term serves: the coded set minus the term's index set."""
        return tuple(x for x in self.coded_set if x not in term.index_set)


@dataclass(frozen=True)
class DemandAssignment:
    """Map from active user (r-subset of cache labels) to demanded file index.

    Keys are normalized to sorted tuples. Any subset of the user population
    may be active; validation against concrete parameters happens inside the
    operations that consume the assignment.
    """

    entries: Mapping[tuple[int, ...], int]

    def __post_init__(self) -> None:
        normalized = {}
        for user, file_index in dict(self.entries).items():
            key = tuple(sorted(user))
            if len(set(key)) != len(key):
                raise DemandError(f"user {user} repeats a cache label")
            if key in normalized:
                raise DemandError(f"user {key} assigned more than one demand")
            normalized[key] = int(file_index)
        object.__setattr__(self, "entries", normalized)

    @classmethod
    def from_request_vector(cls, params: SchemeParams, requests: Sequence[int]) -> "DemandAssignment":
        """Demands for the full population, one per user in lexicographic order."""
        if len(requests) != params.num_users:
            raise DemandError(
                f"request vector has {len(requests)} entries, expected {params.num_users}"
            )
        return cls(dict(zip(params.users(), requests)))

    def active_users(self) -> list[tuple[int, ...]]:
        return sorted(self.entries)


def _check_demand(params: SchemeParams, demand: DemandAssignment, strict: bool) -> None:
    """Validate a demand assignment against concrete parameters.

    Strict mode additionally requires pairwise-distinct file indices, the
    regime the rate analysis assumes. Decoding itself never needs it.
    """
    C, r, N = params.num_caches, params.access_degree, params.num_files
    for user, file_index in demand.entries.items():
        try:
            validate_subset(user, C, r)
        except ValueError as exc:
            raise DemandError(f"user {user} is not a valid user identity: {exc}") from exc
        if not 1 <= file_index <= N:
            raise DemandError(f"user {user} demands file {file_index}, outside 1..{N}")
    if strict:
        values = list(demand.entries.values())
        if len(set(values)) != len(values):
            raise DemandError("demands must be pairwise distinct in strict mode")


def build_placement(params: SchemeParams) -> list[CacheContent]:
    """Fill the C caches: cache k holds W_{i,T} for every T containing k.

    Each cache ends up with N * binom(C-1, t-1) subfiles, a fraction t/C of
    the library.
    """
    C, t, N = params.num_caches, params.cache_param, params.num_files
    per_cache: dict[int, list[SubfileId]] = {k: [] for k in range(1, C + 1)}
    for index_set in enumerate_subsets(C, t):
        for i in range(1, N + 1):
            subfile = SubfileId(i, index_set)
            for k in index_set:
                per_cache[k].append(subfile)
    return [CacheContent(k, frozenset(per_cache[k])) for k in range(1, C + 1)]


def accessible_subfile_indices(params: SchemeParams, user: Sequence[int]) -> set[tuple[int, ...]]:
    """Index sets a user can read: exactly the T with T intersecting the user."""
    user_set = set(validate_subset(user, params.num_caches, params.access_degree))
    return {
        T
        for T in params.subfile_index_sets()
        if user_set.intersection(T)
    }


def accessible_fraction(params: SchemeParams) -> Fraction:
    """Fraction of each file a user reaches through its r caches.

    Inclusion-exclusion over the caches gives
        (1/binom(C,t)) * sum_{n=1..r} (-1)^(n+1) binom(r,n) binom(C-n, t-n),
    the same value for every user by symmetry. Terms with n > t vanish
    through the out-of-range binomial convention.
    """
    C, r, t = params.num_caches, params.access_degree, params.cache_param
    total = sum(
        (-1) ** (n + 1) * binom(r, n) * binom(C - n, t - n)
        for n in range(1, r + 1)
    )
    return Fraction(total, binom(C, t))


def _coded_sets(params: SchemeParams, demand: DemandAssignment) -> Iterator[tuple[int, ...]]:
    """(t+r)-subsets that carry at least one active user's missing subfile.

    A set S is useful exactly when it contains an active user U: the index
    set S \\ U is then disjoint from U, hence missing for U. With the full
    population active that is every (t+r)-subset.
    """
    C, r, t = params.num_caches, params.access_degree, params.cache_param
    if len(demand.entries) == params.num_users:
        yield from enumerate_subsets(C, t + r)
        return
    seen: set[tuple[int, ...]] = set()
    for user in demand.entries:
        rest = [x for x in range(1, C + 1) if x not in user]
        for extra in combinations(rest, t):
            seen.add(tuple(sorted(user + extra)))
    yield from sorted(seen)


def generate_transmissions(
    params: SchemeParams,
    demand: DemandAssignment,
    strict: bool = True,
) -> list[Transmission]:
    """Delivery phase: one Transmission per useful (t+r)-subset, in lex order.

    Each transmission XORs W_{d_U, S \\ U} over the active users U inside its
    coded set S, terms ordered lexicographically by U. Returns an empty list
    when t + r > C (nothing left to deliver).
    """
    _check_demand(params, demand, strict)
    C, r, t = params.num_caches, params.access_degree, params.cache_param
    if t + r > C:
        return []
    out = []
    for coded_set in _coded_sets(params, demand):
        terms = tuple(
            SubfileId(demand.entries[u], tuple(x for x in coded_set if x not in u))
            for u in combinations(coded_set, r)
            if u in demand.entries
        )
        if terms:
            out.append(Transmission(coded_set, terms))
    return out


def _peel_plan(
    user: tuple[int, ...],
    demand: DemandAssignment,
    transmissions: Sequence[Transmission],
    accessible: frozenset[SubfileId],
) -> Iterator[tuple[Transmission, SubfileId, list[SubfileId]]]:
    """Yield (transmission, target term, cancellable terms) for one user.

    Verifies the decodability argument on the way: in any transmission whose
    coded set contains the user, every term serving another user must be
    readable from the user's caches, because its index set meets the user.
    """
    user_set = set(user)
    wanted = demand.entries[user]
    for tx in transmissions:
        if not user_set.issubset(tx.coded_set):
            continue
        target = None
        others = []
        for term in tx.terms:
            if user_set.isdisjoint(term.index_set):
                if target is not None:
                    raise DecodingError(
                        f"transmission {tx.coded_set} carries two terms for user {user}"
                    )
                target = term
            else:
                if term not in accessible:
                    raise DecodingError(
                        f"user {user} cannot cancel term {term} in transmission {tx.coded_set}"
                    )
                others.append(term)
        if target is None:
            raise DecodingError(
                f"transmission {tx.coded_set} contains user {user} but no term for it"
            )
        if target.file_index != wanted:
            raise DecodingError(
                f"transmission {tx.coded_set} serves user {user} file {target.file_index}, "
                f"demand is {wanted}"
            )
        yield tx, target, others


def _accessible_subfiles(
    user: tuple[int, ...], caches: Sequence[CacheContent]
) -> frozenset[SubfileId]:
    by_label = {c.cache_label: c for c in caches}
    pool: set[SubfileId] = set()
    for k in user:
        pool.update(by_label[k].subfiles)
    return frozenset(pool)


def decode_user(
    params: SchemeParams,
    user: Sequence[int],
    demand: DemandAssignment,
    transmissions: Sequence[Transmission],
    caches: Sequence[CacheContent],
) -> set[SubfileId]:
    """Subfiles of the demanded file a user recovers from the transmissions.

    Returns the peeled subfiles only; together with the index sets already
    readable from the user's caches they cover all binom(C, t) pieces.
    Raises DecodingError if any transmission is not peelable, since that
    would mean the construction is broken.
    """
    user = validate_subset(user, params.num_caches, params.access_degree)
    if user not in demand.entries:
        raise DemandError(f"user {user} has no demand assigned")
    accessible = _accessible_subfiles(user, caches)
    recovered = set()
    for _, target, _ in _peel_plan(user, demand, transmissions, accessible):
        recovered.add(target)
    return recovered


def _chunk_matrix(
    params: SchemeParams, file_payloads: Sequence[bytes]
) -> tuple[np.ndarray, int]:
    """Split payloads into the (N, F, chunk_len) uint8 matrix, zero-padded.

    Subfile T of file i is row (i-1, rank(T)). Returns the matrix and the
    original payload length for truncation after reassembly.
    """
    N = params.num_files
    if len(file_payloads) != N:
        raise ValueError(f"expected {N} payloads, got {len(file_payloads)}")
    lengths = {len(p) for p in file_payloads}
    if len(lengths) > 1:
        raise ValueError(f"payloads must share one length, got lengths {sorted(lengths)}")
    (length,) = lengths or {0}
    F = params.subpacketization
    chunk_len = -(-length // F) if length else 0
    chunks = np.zeros((N, F, chunk_len), dtype=np.uint8)
    for i, payload in enumerate(file_payloads):
        flat = np.frombuffer(payload, dtype=np.uint8)
        chunks[i].reshape(-1)[: len(flat)] = flat
    return chunks, length


def simulate_end_to_end(
    params: SchemeParams,
    file_payloads: Sequence[bytes],
    demand: DemandAssignment,
    strict: bool = True,
) -> dict[tuple[int, ...], bytes]:
    """Run placement, delivery and decoding on real bytes.

    Every file is chopped into binom(C, t) chunks (zero-padded to divide
    evenly); coded messages are bytewise XORs of chunks. Returns the bytes
    each active user reassembles, which must equal its demanded payload.
    """
    _check_demand(params, demand, strict)
    C, t = params.num_caches, params.cache_param
    F = params.subpacketization
    chunks, length = _chunk_matrix(params, file_payloads)
    caches = build_placement(params)
    transmissions = generate_transmissions(params, demand, strict)

    rank_of = {T: rank_subset(T, C) for T in enumerate_subsets(C, t)}
    coded_payloads = {}
    for tx in transmissions:
        parts = np.stack([chunks[f - 1, rank_of[T]] for f, T in tx.terms])
        coded_payloads[tx.coded_set] = np.bitwise_xor.reduce(parts, axis=0)

    outputs = {}
    for user in demand.active_users():
        wanted = demand.entries[user]
        accessible = _accessible_subfiles(user, caches)
        user_set = set(user)
        pieces: list[np.ndarray | None] = [None] * F
        for T, rank in rank_of.items():
            if user_set.intersection(T):
                pieces[rank] = chunks[wanted - 1, rank]
        for tx, target, others in _peel_plan(user, demand, transmissions, accessible):
            coded = coded_payloads[tx.coded_set]
            for term in others:
                coded = coded ^ chunks[term.file_index - 1, rank_of[term.index_set]]
            pieces[rank_of[target.index_set]] = coded
        if any(p is None for p in pieces):
            missing = [T for T, rank in rank_of.items() if pieces[rank] is None]
            raise DecodingError(f"user {user} never obtained subfile indices {missing}")
        assembled = np.concatenate([p.reshape(-1) for p in pieces]) if F else np.array([], np.uint8)
        outputs[user] = assembled.tobytes()[:length]
    return outputs
