"""Ranking datasets: the embedded APA election data and CSV ingestion.

The builtin "apa" dataset is the American Psychological Association
presidential election: 120 rankings of 5 candidates with the number of
voters choosing each.  Note the source publication states two different
voter totals in different places (5738 and 5972); the counts embedded
here sum to whatever they sum to, and that sum is what the package
reports.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from .perms import Perm, inverse, is_permutation, perm_from_str, perm_to_str
from .spectral import RankFunction

# ranking -> number of voters, column by column from the published table
_APA_ROWS = """
54321 29  43521 91  32541 41  21543 36
54312 67  43512 84  32514 64  21534 42
54231 37  43251 30  32451 34  21453 24
54213 24  43215 35  32415 75  21435 26
54132 43  43152 38  32154 82  21354 30
54123 28  43125 35  32145 74  21345 40
53421 57  42531 58  31542 30  15432 40
53412 49  42513 66  31524 34  15423 35
53241 22  42351 24  31452 40  15342 36
53214 22  42315 51  31425 42  15324 17
53142 34  42153 52  31254 30  15243 70
53124 26  42135 40  31245 34  15234 50
52431 54  41532 50  25431 35  14532 52
52413 44  41523 45  25413 34  14523 48
52341 26  41352 31  25341 40  14352 51
52314 24  41325 23  25314 21  14325 24
52143 35  41253 22  25143 106 14253 70
52134 50  41235 16  25134 79  14235 45
51432 50  35421 71  24531 63  13542 35
51423 46  35412 61  24513 53  13524 28
51342 25  35241 41  24351 44  13452 37
51324 19  35214 27  24315 28  13425 35
51243 11  35142 45  24153 162 13254 95
51234 29  35124 36  24135 96  13245 102
45321 31  34521 107 23541 45  12543 34
45312 54  34512 133 23514 52  12534 35
45231 34  34251 62  23451 53  12453 29
45213 24  34215 28  23415 52  12435 27
45132 38  34152 87  23154 186 12354 28
45123 30  34125 35  23145 172 12345 30
"""


def _apa_records() -> list[tuple[str, int]]:
    records = []
    for line in _APA_ROWS.strip().splitlines():
        tokens = line.split()
        for ranking, count in zip(tokens[::2], tokens[1::2]):
            records.append((ranking, int(count)))
    return records


class DatasetError(ValueError):
    """Malformed dataset input; message names the offending line."""


@dataclass
class Dataset:
    """A named collection of (ranking, count) records on S_n."""

    n: int
    records: list[tuple[str, int]]
    name: str = ""
    source: str = ""

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for ranking, count in self.records:
            try:
                p = perm_from_str(ranking)
            except ValueError as e:
                raise DatasetError(str(e)) from None
            if len(p) != self.n:
                raise DatasetError(f"ranking {ranking!r} has wrong degree")
            if count < 0:
                raise DatasetError(f"negative count for {ranking!r}")
            if ranking in seen:
                raise DatasetError(f"duplicate ranking {ranking!r}")
            seen.add(ranking)

    def total(self) -> int:
        return sum(c for _, c in self.records)

    def to_rank_function(self) -> RankFunction:
        # Ranking strings on the wire give the rank assigned to each
        # candidate (digit r at place c means candidate c holds rank r);
        # internally a permutation lists the item in each position, so
        # parsing inverts.  Reproducing the published first-order table
        # from the published raw counts requires exactly this reading.
        return RankFunction(
            self.n, {inverse(perm_from_str(r)): c for r, c in self.records}
        )


def builtin_apa() -> Dataset:
    return Dataset(
        n=5,
        records=_apa_records(),
        name="apa",
        source="APA presidential election, 120 rankings of 5 candidates",
    )


BUILTINS = {"apa": builtin_apa}


def load_dataset(path_or_name: str) -> Dataset:
    """Load a builtin dataset by name or a CSV file with header
    ``ranking,count``."""
    if path_or_name in BUILTINS:
        return BUILTINS[path_or_name]()
    records: list[tuple[str, int]] = []
    n = None
    try:
        fh = open(path_or_name, newline="")
    except OSError as e:
        raise DatasetError(f"{path_or_name}: {e.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["ranking", "count"]:
            raise DatasetError(f"{path_or_name}: expected header 'ranking,count'")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise DatasetError(f"{path_or_name}:{lineno}: expected 'ranking,count'")
            ranking = row[0].strip()
            try:
                p = perm_from_str(ranking)
            except ValueError as e:
                raise DatasetError(f"{path_or_name}:{lineno}: {e}") from None
            try:
                count = int(row[1])
            except ValueError:
                raise DatasetError(
                    f"{path_or_name}:{lineno}: count {row[1]!r} is not an integer"
                ) from None
            if count < 0:
                raise DatasetError(f"{path_or_name}:{lineno}: negative count {count}")
            if n is None:
                n = len(p)
            elif len(p) != n:
                raise DatasetError(
                    f"{path_or_name}:{lineno}: ranking {ranking!r} has degree "
                    f"{len(p)}, expected {n}"
                )
            if any(r == ranking for r, _ in records):
                raise DatasetError(f"{path_or_name}:{lineno}: duplicate ranking {ranking!r}")
            records.append((ranking, count))
    if n is None:
        raise DatasetError(f"{path_or_name}: no records")
    return Dataset(n=n, records=records, name=path_or_name)


def save_dataset(ds: Dataset, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ranking", "count"])
        writer.writerows(ds.records)


def rank_function_to_dataset(f: RankFunction, name: str = "") -> Dataset:
    records = [
        (perm_to_str(inverse(p)), c) for p, c in sorted(f.counts.items()) if c
    ]
    records.sort()
    return Dataset(n=f.n, records=records, name=name)
