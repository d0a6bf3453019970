"""Input table: parsed request rows, segmented into ordered task steps."""

from dataclasses import dataclass, field

from .errors import BadIndex, EmptyInput, NonRectangular
from .semantics import StepText, segment_steps

PENDING = "Pending"
CURRENT = "Current"
DONE = "Done"


@dataclass
class TaskStep:
    text: StepText
    status: str = PENDING
    edited: bool = False


@dataclass
class Cell:
    raw: str
    steps: list[TaskStep] = field(default_factory=list)


@dataclass
class TableRow:
    cells: list[Cell]
    original_index: int

    @property
    def steps(self) -> list[TaskStep]:
        return [step for cell in self.cells for step in cell.steps]

    @property
    def step_count(self) -> int:
        return sum(len(cell.steps) for cell in self.cells)

    @property
    def values(self) -> list[str]:
        return [cell.raw for cell in self.cells]


@dataclass
class InputTable:
    columns: list[str]
    rows: list[TableRow]

    def step_at(self, row: int, step: int) -> TaskStep:
        if row < 0 or row >= len(self.rows):
            raise BadIndex(f"row {row} is out of range")
        steps = self.rows[row].steps
        if step < 0 or step >= len(steps):
            raise BadIndex(f"step {step} is out of range for row {row}")
        return steps[step]

    def replace_step(self, row: int, step: int, text: str) -> TaskStep:
        new_text = StepText.from_raw(text)
        if not new_text.normalized:
            raise BadIndex("step text must contain at least one word")
        target = self.step_at(row, step)
        target.text = new_text
        target.edited = True
        return target


def load_input(records: list[dict]) -> InputTable:
    """Build the table: segment every cell, rank the busiest row first.

    Ranking moves the row with the most identified steps to the front so the
    bulk of distinct demonstrations happens early; all other rows keep their
    original order.
    """
    if not isinstance(records, list) or not records:
        raise EmptyInput("input must be a non-empty list of records")
    first = records[0]
    if not isinstance(first, dict) or not first:
        raise EmptyInput("input records must be non-empty objects")
    columns = list(first.keys())
    rows: list[TableRow] = []
    for i, record in enumerate(records):
        if not isinstance(record, dict) or set(record.keys()) != set(columns):
            raise NonRectangular(f"record {i} does not share the field set of record 0")
        cells = []
        for name in columns:
            value = record[name]
            if not isinstance(value, str):
                raise NonRectangular(f"record {i} field {name!r} is not a string")
            cells.append(Cell(raw=value,
                              steps=[TaskStep(t) for t in segment_steps(value)]))
        rows.append(TableRow(cells, original_index=i))
    counts = [row.step_count for row in rows]
    top = counts.index(max(counts))
    ordered = [rows[top]] + rows[:top] + rows[top + 1:]
    return InputTable(columns, ordered)
