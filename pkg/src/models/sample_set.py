import numpy as np
from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True, eq=False)
class SampleSet:
    """An ordered batch of i.i.d. observations with its provenance"""
    values: np.ndarray
    seed: int = 0
    source_label: str = "manual"

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("a SampleSet needs at least one observation")
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @classmethod
    def of(cls, values: Iterable[float], source_label: str = "manual") -> "SampleSet":
        """Wrap hand-written observations"""
        return cls(np.fromiter(values, dtype=float), 0, source_label)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def replace_at(self, index: int, value: float) -> "SampleSet":
        """Copy with one observation swapped out"""
        values = self.values.copy()
        values[index] = value
        return SampleSet(values, self.seed, self.source_label)

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[float]:
        return iter(self.values.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, SampleSet):
            return NotImplemented
        return (self.seed == other.seed
                and self.source_label == other.source_label
                and np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((self.seed, self.source_label, self.values.tobytes()))
