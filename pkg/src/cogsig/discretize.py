"""Binning of continuous attributes and integer coding of categorical ones.

Continuous columns (timings and coordinates) are cut into ``k`` intervals
either at equal-frequency quantiles or on an equal-width grid; NILL gets a
dedicated missing bin (index ``k``) because "nothing happened this tick"
is signal, not noise.  Categorical columns are coded through stable
(sorted) code books.  The fitted schemes travel with the trained model so
that later data is encoded with the exact training-time cuts.
"""

from __future__ import annotations

import bisect
import warnings
from dataclasses import dataclass, field

import numpy as np

from .features import NILL, YES, CaseTable

METHOD_EQUAL_FREQUENCY = "equal-frequency"
METHOD_EQUAL_WIDTH = "equal-width"
METHODS = (METHOD_EQUAL_FREQUENCY, METHOD_EQUAL_WIDTH)

# Attribute columns entering the model, in canonical order.  Raw
# real_time_s and tick_index are bookkeeping (they index the row, so they
# would leak identity); timing enters through deltas instead.
CATEGORICAL_ATTRIBUTES = (
    "left_click_down",
    "left_click_release",
    "keypress",
    "mouse_movement",
    "cognitive_stimulus",
    "hco",
    "mco",
    "htt",
)
CONTINUOUS_ATTRIBUTES = ("real_time_delta", "dt_ms", "mouse_x", "mouse_y")


@dataclass(frozen=True)
class DiscretizationScheme:
    """Fitted bin boundaries for one continuous attribute.

    Bins are right-open ``[b_{i-1}, b_i)`` with the first open below and
    the last closed above; code ``k`` is the reserved missing bin.
    """

    attribute: str
    method: str
    k: int
    boundaries: tuple[float, ...]

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"interval count must be >= 2, got {self.k}")
        if list(self.boundaries) != sorted(set(self.boundaries)):
            raise ValueError("boundaries must be strictly ascending")
        if len(self.boundaries) != self.k - 1:
            raise ValueError("need k-1 boundaries")

    @property
    def missing_bin(self) -> int:
        return self.k

    @property
    def cardinality(self) -> int:
        return self.k + 1

    def apply(self, value: float | None) -> int:
        """Bin a value; missing maps to the reserved bin, out-of-range clamps."""
        if value is None:
            return self.missing_bin
        return bisect.bisect_right(self.boundaries, value)


@dataclass(frozen=True)
class CodeBook:
    """Bijective value<->code map for one categorical attribute."""

    attribute: str
    values: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.values)) != len(self.values):
            raise ValueError("code book values must be distinct")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.values)})

    @property
    def cardinality(self) -> int:
        return len(self.values)

    def encode(self, value) -> int:
        """Code a value; unseen values fall back to the NILL code (or 0)."""
        text = _stringify(value)
        code = self._index.get(text)
        if code is None:
            code = self._index.get(NILL, 0)
        return code

    def decode(self, code: int) -> str:
        return self.values[code]


Encoder = DiscretizationScheme | CodeBook


@dataclass(frozen=True, eq=False)
class DiscreteTable:
    """Integer-coded table ready for counting-based learning."""

    columns: tuple[str, ...]
    codes: np.ndarray                      # (n_rows, n_columns) integer codes
    cardinalities: tuple[int, ...]
    class_column: str
    encoders: dict[str, Encoder] | None = None

    def __post_init__(self):
        if self.codes.ndim != 2 or self.codes.shape[1] != len(self.columns):
            raise ValueError("codes shape does not match columns")
        if len(self.cardinalities) != len(self.columns):
            raise ValueError("need one cardinality per column")
        for j, card in enumerate(self.cardinalities):
            col = self.codes[:, j]
            if col.size and (col.min() < 0 or col.max() >= card):
                raise ValueError(f"codes out of range for column {self.columns[j]!r}")

    @property
    def n_rows(self) -> int:
        return self.codes.shape[0]

    def column_index(self, column: str) -> int:
        try:
            return self.columns.index(column)
        except ValueError:
            raise ValueError(f"unknown column {column!r}") from None

    def column(self, column: str) -> np.ndarray:
        return self.codes[:, self.column_index(column)]

    def cardinality(self, column: str) -> int:
        return self.cardinalities[self.column_index(column)]

    @property
    def attribute_columns(self) -> tuple[str, ...]:
        return tuple(c for c in self.columns if c != self.class_column)

    def class_labels(self) -> tuple[str, ...]:
        if self.encoders and self.class_column in self.encoders:
            book = self.encoders[self.class_column]
            if isinstance(book, CodeBook):
                return book.values
        return tuple(str(i) for i in range(self.cardinality(self.class_column)))


def _finite(values) -> np.ndarray:
    arr = np.asarray([v for v in values if v is not None], dtype=float)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError("non-finite values in continuous column")
    return arr


def _collapse_duplicate_cuts(attribute: str, k: int, cuts: list[float]) -> tuple[int, tuple[float, ...]]:
    unique: list[float] = []
    for b in cuts:
        if not unique or b > unique[-1]:
            unique.append(b)
    if len(unique) < len(cuts):
        warnings.warn(
            f"ties collapsed {len(cuts) - len(unique)} duplicate boundaries for "
            f"{attribute!r}; intervals reduced from {k} to {len(unique) + 1}")
    return len(unique) + 1, tuple(unique)


def fit_equal_frequency(values, k: int, attribute: str = "") -> DiscretizationScheme:
    """Fit quantile cuts so that bin occupancies are as even as possible.

    Boundaries sit at the i/k empirical quantiles, interpolated as the
    midpoint of the straddling order statistics.  Tied data may collapse
    duplicate cuts, reducing the effective interval count (with a warning).
    """
    if k < 2:
        raise ValueError(f"interval count must be >= 2, got {k}")
    xs = np.sort(_finite(values))
    if xs.size < k:
        raise ValueError(f"need at least {k} non-missing values, got {xs.size}")
    if xs[0] == xs[-1]:
        raise ValueError(f"degenerate column {attribute!r}: all values identical")
    cuts = []
    n = xs.size
    for i in range(1, k):
        m = (i * n) // k
        cuts.append(float((xs[m - 1] + xs[m]) / 2.0))
    k_eff, boundaries = _collapse_duplicate_cuts(attribute, k, cuts)
    return DiscretizationScheme(attribute=attribute, method=METHOD_EQUAL_FREQUENCY,
                                k=k_eff, boundaries=boundaries)


def fit_equal_width(values, k: int, attribute: str = "") -> DiscretizationScheme:
    """Fit k equal-width intervals spanning [min, max] of the data."""
    if k < 2:
        raise ValueError(f"interval count must be >= 2, got {k}")
    xs = _finite(values)
    if xs.size == 0:
        raise ValueError(f"degenerate column {attribute!r}: no values")
    lo, hi = float(xs.min()), float(xs.max())
    if hi == lo:
        raise ValueError(f"degenerate column {attribute!r}: max equals min")
    cuts = [lo + i * (hi - lo) / k for i in range(1, k)]
    k_eff, boundaries = _collapse_duplicate_cuts(attribute, k, cuts)
    return DiscretizationScheme(attribute=attribute, method=METHOD_EQUAL_WIDTH,
                                k=k_eff, boundaries=boundaries)


def fit_scheme(values, method: str, k: int, attribute: str = "") -> DiscretizationScheme:
    if method == METHOD_EQUAL_FREQUENCY:
        return fit_equal_frequency(values, k, attribute)
    if method == METHOD_EQUAL_WIDTH:
        return fit_equal_width(values, k, attribute)
    raise ValueError(f"unknown discretization method {method!r}")


def _stringify(value) -> str:
    if value is None:
        return NILL
    if value is True:
        return YES
    if value is False:
        return NILL
    return str(value)


def _real_time_deltas(table: CaseTable) -> list[float | None]:
    """Real-time increment since the previous recorded case, in seconds.

    Derived from the event gap quantized to the 0.01 s resolution of the
    real-time column, so the value does not depend on which other rows of
    the session happen to be present in this particular table.
    """
    deltas: list[float | None] = []
    for dt in table.column_values("dt_ms"):
        deltas.append(None if dt is None else round(dt / 10.0) / 100.0)
    return deltas


def _attribute_values(table: CaseTable, column: str) -> list:
    if column == "real_time_delta":
        return _real_time_deltas(table)
    return table.column_values(column)


def _model_columns(table: CaseTable) -> tuple[list[str], list[str]]:
    categorical = [c for c in CATEGORICAL_ATTRIBUTES if c in table.columns]
    continuous = [c for c in CONTINUOUS_ATTRIBUTES if c in table.columns]
    if "real_time_s" in table.columns and "real_time_delta" not in continuous:
        continuous.insert(0, "real_time_delta")
    return categorical, continuous


def discretize_table(table: CaseTable, method: str, k: int) -> DiscreteTable:
    """Fit encoders on a case table and produce its coded form.

    Continuous columns get fitted bin schemes; a column too degenerate to
    cut (constant, or fewer than k values) falls back to single-category
    coding with a warning.  Categorical columns and the class column get
    sorted code books; the class column is coded last.
    """
    if not table.rows:
        raise ValueError("empty case table")
    categorical, continuous = _model_columns(table)
    columns = categorical + continuous + [table.class_column]

    encoders: dict[str, Encoder] = {}
    for col in categorical + [table.class_column]:
        distinct = sorted({_stringify(v) for v in _attribute_values(table, col)})
        encoders[col] = CodeBook(attribute=col, values=tuple(distinct))
    for col in continuous:
        values = _attribute_values(table, col)
        try:
            encoders[col] = fit_scheme([v for v in values if v is not None],
                                       method, k, attribute=col)
        except ValueError as exc:
            warnings.warn(f"column {col!r} not discretizable ({exc}); "
                          "coding as single category")
            distinct = sorted({_stringify(v) for v in values})
            encoders[col] = CodeBook(attribute=col, values=tuple(distinct))
    return encode_table(table, columns, encoders)


def encode_table(table: CaseTable, columns: list[str] | tuple[str, ...],
                 encoders: dict[str, Encoder]) -> DiscreteTable:
    """Code a case table with previously fitted encoders."""
    n = len(table.rows)
    codes = np.zeros((n, len(columns)), dtype=np.int64)
    cards = []
    for j, col in enumerate(columns):
        enc = encoders[col]
        values = _attribute_values(table, col)
        if isinstance(enc, DiscretizationScheme):
            codes[:, j] = [enc.apply(v) for v in values]
        else:
            codes[:, j] = [enc.encode(v) for v in values]
        cards.append(enc.cardinality)
    return DiscreteTable(columns=tuple(columns), codes=codes,
                         cardinalities=tuple(cards),
                         class_column=table.class_column, encoders=dict(encoders))


def scheme_to_dict(enc: Encoder) -> dict:
    if isinstance(enc, DiscretizationScheme):
        return {"type": "continuous", "attribute": enc.attribute,
                "method": enc.method, "k": enc.k,
                "boundaries": list(enc.boundaries)}
    return {"type": "categorical", "attribute": enc.attribute,
            "values": list(enc.values)}


def scheme_from_dict(obj: dict) -> Encoder:
    if obj["type"] == "continuous":
        return DiscretizationScheme(attribute=obj["attribute"], method=obj["method"],
                                    k=int(obj["k"]),
                                    boundaries=tuple(float(b) for b in obj["boundaries"]))
    if obj["type"] == "categorical":
        return CodeBook(attribute=obj["attribute"], values=tuple(obj["values"]))
    raise ValueError(f"unknown encoder type {obj.get('type')!r}")
