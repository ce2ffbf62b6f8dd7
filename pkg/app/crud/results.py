import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

import pandas as pd

from app.interfaces.data_interfaces import ResultRepository

logger = logging.getLogger(__name__)

RESULT_COLUMNS = [
    "variant", "estimator", "p", "d_max", "T", "seed",
    "f1", "precision", "recall",
    "max_abs_err_A", "frob_err_A", "err_b", "err_rho",
    "converged", "runtime_ms", "error",
]

SUMMARY_COLUMNS = ["estimator", "T", "n", "mean_f1", "std_f1"]


def _write_commented(frame: pd.DataFrame, path: Path, header_lines: Sequence[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for line in header_lines:
            handle.write(f"# {line}\n")
        frame.to_csv(handle, index=False, float_format="%.12g", lineterminator="\n")


class CsvResultRepository(ResultRepository):
    """Linhas de resultado de experimento num CSV com cabeçalho `#` de proveniência"""

    def __init__(self, path: str | Path, header_lines: Sequence[str] = ()):
        self.path = Path(path)
        self.header_lines = list(header_lines)

    def save(self, rows: List[Dict[str, Any]]) -> str:
        frame = pd.DataFrame(rows, columns=RESULT_COLUMNS)
        _write_commented(frame, self.path, self.header_lines)
        logger.info(f"💾 {len(frame)} linhas de resultado salvas em {self.path}")
        return str(self.path)

    def find_all(self) -> List[Dict[str, Any]]:
        if not self.path.exists():
            return []
        frame = pd.read_csv(self.path, comment="#", keep_default_na=False, na_values=[""])
        return frame.to_dict(orient="records")


def summarize(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    """Média e desvio padrão (populacional) do F1 por (estimador, T)"""
    frame = pd.DataFrame(rows, columns=RESULT_COLUMNS)
    frame = frame[frame["error"].isna() | (frame["error"] == "")]
    grouped = frame.groupby(["estimator", "T"], sort=False)["f1"]
    summary = grouped.agg(n="count", mean_f1="mean", std_f1=lambda s: s.std(ddof=0)).reset_index()
    return summary[SUMMARY_COLUMNS]


def write_summary(summary: pd.DataFrame, path: str | Path, header_lines: Sequence[str] = ()) -> str:
    _write_commented(summary, Path(path), header_lines)
    return str(path)


def write_gnuplot(summary: pd.DataFrame, path: str | Path) -> str:
    """Um bloco por estimador (T, média F1, desvio F1), separados por duas linhas em branco"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    blocks = []
    for estimator, block in summary.groupby("estimator", sort=False):
        lines = [f"# estimator: {estimator}", "# T mean_f1 std_f1"]
        lines += [f"{int(r.T)} {r.mean_f1:.12g} {r.std_f1:.12g}" for r in block.itertuples(index=False)]
        blocks.append("\n".join(lines))
    path.write_text("\n\n\n".join(blocks) + "\n", encoding="utf-8")
    return str(path)
