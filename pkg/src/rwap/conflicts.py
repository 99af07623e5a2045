"""Pairwise conflict sets and the mutually-exclusive group strengthening.

Two lightpaths conflict when they cannot both be selected: a request's own
working and protection lightpaths must be link-disjoint (class c1), and any
two lightpaths carrying the same wavelength must not share a link (classes
c2, c3, c4 for working/protection, working/working and protection/protection
combinations).  The strengthened form replaces those pairwise constraints
with at-most-one groups: per working lightpath, the set of same-request
protections overlapping it; per (link, wavelength), every lightpath covering
that slot.
"""

from __future__ import annotations

from dataclasses import dataclass

from .instance import Instance, PROTECTION, WORKING


def _intersects(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    # merge intersection over sorted link-id lists; paths are short
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return True
        if a[i] < b[j]:
            i += 1
        else:
            j += 1
    return False


@dataclass(frozen=True)
class ConflictSets:
    """The four conflict tuple families, in deterministic sorted order.

    c1 holds (request, working, protection) triples whose paths overlap;
    c2 holds (r1, r2, w, p) with r1 != r2, both orientations enumerated;
    c3/c4 hold each unordered same-kind pair once, canonically ordered
    (r1 < r2, or r1 == r2 with the smaller local index first).
    """

    c1: tuple[tuple[int, int, int], ...]
    c2: tuple[tuple[int, int, int, int], ...]
    c3: tuple[tuple[int, int, int, int], ...]
    c4: tuple[tuple[int, int, int, int], ...]

    @property
    def pair_count(self) -> int:
        return len(self.c1) + len(self.c2) + len(self.c3) + len(self.c4)

    def variable_pairs(self, instance: Instance) -> set[tuple[int, int]]:
        """All conflicting variable-index pairs (i < j), for cross-checks."""
        pairs: set[tuple[int, int]] = set()

        def add(i: int, j: int) -> None:
            pairs.add((i, j) if i < j else (j, i))

        for (r, w, p) in self.c1:
            add(instance.var_of(r, WORKING, w), instance.var_of(r, PROTECTION, p))
        for (r1, r2, w, p) in self.c2:
            add(instance.var_of(r1, WORKING, w), instance.var_of(r2, PROTECTION, p))
        for (r1, r2, w1, w2) in self.c3:
            add(instance.var_of(r1, WORKING, w1), instance.var_of(r2, WORKING, w2))
        for (r1, r2, p1, p2) in self.c4:
            add(instance.var_of(r1, PROTECTION, p1), instance.var_of(r2, PROTECTION, p2))
        return pairs


def build_conflict_sets(instance: Instance) -> ConflictSets:
    """Enumerate c1..c4 exactly from link and wavelength overlaps."""
    sorted_links: dict[int, tuple[int, ...]] = {
        i: tuple(sorted(instance.lightpath_at(i).links)) for i in range(instance.n_vars)
    }

    c1: list[tuple[int, int, int]] = []
    for req in instance.requests:
        for w, wl in enumerate(req.working):
            wkey = sorted_links[instance.var_of(req.id, WORKING, w)]
            for p in range(len(req.protection)):
                if _intersects(wkey, sorted_links[instance.var_of(req.id, PROTECTION, p)]):
                    c1.append((req.id, w, p))

    # same-wavelength classes: pairwise within each wavelength only
    by_wavelength: dict[int, list[int]] = {}
    for i in range(instance.n_vars):
        by_wavelength.setdefault(instance.lightpath_at(i).wavelength, []).append(i)

    c2: set[tuple[int, int, int, int]] = set()
    c3: set[tuple[int, int, int, int]] = set()
    c4: set[tuple[int, int, int, int]] = set()
    for members in by_wavelength.values():
        for a_pos, i in enumerate(members):
            r1, k1, l1 = instance.var_info(i)
            ikey = sorted_links[i]
            for j in members[a_pos + 1 :]:
                r2, k2, l2 = instance.var_info(j)
                if not _intersects(ikey, sorted_links[j]):
                    continue
                if k1 == WORKING and k2 == WORKING:
                    c3.add((r1, r2, l1, l2) if (r1, l1) < (r2, l2) else (r2, r1, l2, l1))
                elif k1 == PROTECTION and k2 == PROTECTION:
                    c4.add((r1, r2, l1, l2) if (r1, l1) < (r2, l2) else (r2, r1, l2, l1))
                elif r1 != r2:
                    if k1 == WORKING:
                        c2.add((r1, r2, l1, l2))
                    else:
                        c2.add((r2, r1, l2, l1))
                # same-request working/protection overlap is already in c1
    return ConflictSets(
        c1=tuple(sorted(c1)),
        c2=tuple(sorted(c2)),
        c3=tuple(sorted(c3)),
        c4=tuple(sorted(c4)),
    )


@dataclass(frozen=True)
class StrongGroups:
    """Mutually-exclusive variable groups replacing the pairwise conflicts.

    pbar maps (request, working local index) to the local indices of that
    request's protections sharing a link with the working path.  groups maps
    (link, wavelength) to the sorted variable indices of every lightpath
    covering that slot; groups with fewer than two members constrain nothing
    and are skipped at constraint emission but kept here for counting.
    """

    pbar: dict[tuple[int, int], tuple[int, ...]]
    groups: dict[tuple[int, int], tuple[int, ...]]

    def emitted_groups(self) -> list[tuple[tuple[int, int], tuple[int, ...]]]:
        return [(key, mem) for key, mem in sorted(self.groups.items()) if len(mem) >= 2]

    @property
    def emitted_group_count(self) -> int:
        return sum(1 for mem in self.groups.values() if len(mem) >= 2)

    @property
    def nonempty_group_count(self) -> int:
        return len(self.groups)

    def variable_pairs(self, instance: Instance) -> set[tuple[int, int]]:
        """Pairwise closure of pbar and the (link, wavelength) groups."""
        pairs: set[tuple[int, int]] = set()
        for (r, w), plist in self.pbar.items():
            i = instance.var_of(r, WORKING, w)
            for p in plist:
                j = instance.var_of(r, PROTECTION, p)
                pairs.add((i, j) if i < j else (j, i))
        for members in self.groups.values():
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    pairs.add((members[a], members[b]))
        return pairs


def build_strong_groups(instance: Instance) -> StrongGroups:
    pbar: dict[tuple[int, int], tuple[int, ...]] = {}
    for req in instance.requests:
        for w, wl in enumerate(req.working):
            wkey = tuple(sorted(wl.links))
            overlapping = tuple(
                p for p, pl in enumerate(req.protection) if _intersects(wkey, tuple(sorted(pl.links)))
            )
            pbar[(req.id, w)] = overlapping

    groups: dict[tuple[int, int], list[int]] = {}
    for i in range(instance.n_vars):
        lp = instance.lightpath_at(i)
        for e in lp.links:
            groups.setdefault((e, lp.wavelength), []).append(i)
    return StrongGroups(
        pbar=pbar,
        groups={key: tuple(sorted(members)) for key, members in sorted(groups.items())},
    )


@dataclass(frozen=True)
class ConstraintCounts:
    """Constraint counts of both model variants, for cons/vars reports."""

    variables: int
    base_constraints: int
    strong_constraints: int
    strong_constraints_all_nonempty: int

    @property
    def base_ratio(self) -> float:
        return self.base_constraints / self.variables if self.variables else 0.0

    @property
    def strong_ratio(self) -> float:
        return self.strong_constraints / self.variables if self.variables else 0.0

    @property
    def strong_ratio_all_nonempty(self) -> float:
        return self.strong_constraints_all_nonempty / self.variables if self.variables else 0.0


def count_constraints(instance: Instance, conflict_sets: ConflictSets, strong: StrongGroups) -> ConstraintCounts:
    n_req = len(instance.requests)
    n_working = sum(len(req.working) for req in instance.requests)
    return ConstraintCounts(
        variables=instance.n_vars,
        base_constraints=2 * n_req + conflict_sets.pair_count,
        strong_constraints=2 * n_req + n_working + strong.emitted_group_count,
        strong_constraints_all_nonempty=2 * n_req + n_working + strong.nonempty_group_count,
    )
