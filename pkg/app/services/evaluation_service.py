import logging
from typing import Optional

import numpy as np

from app.core.exceptions import DimensionMismatchError
from app.models.evaluation import EdgeSet, ParameterErrors, ScoreReport
from app.models.params import AnyParams

logger = logging.getLogger(__name__)


def _supports(params: AnyParams) -> np.ndarray:
    """Peso de cada entrada (i, j): max(a_ij, ã_ij)"""
    A = np.asarray(params.A)
    if params.is_generic:
        return np.maximum(A, np.asarray(params.A_tilde))
    return A


def _edge_set(weights: np.ndarray, mask: np.ndarray) -> EdgeSet:
    # entrada (i, j) da matriz é a aresta j -> i
    rows, cols = np.nonzero(mask)
    return EdgeSet(p=weights.shape[0], edges=frozenset(zip(cols.tolist(), rows.tolist())))


def true_edges(params: AnyParams) -> EdgeSet:
    """(j, i) ∈ E ⟺ a_ij > 0 (ou ã_ij > 0 no modelo genérico)"""
    weights = _supports(params)
    return _edge_set(weights, weights > 0.0)


def infer_edges(estimate: AnyParams, a_min: float, c_thresh: float) -> EdgeSet:
    """(j, i) inferida quando max(â_ij, ẫ_ij) >= c·a_min"""
    if not 0.0 < c_thresh < 1.0:
        raise ValueError(f"c_thresh must be in (0, 1), got {c_thresh}")
    if not 0.0 < a_min < 1.0:
        raise ValueError(f"a_min must be in (0, 1), got {a_min}")
    weights = _supports(estimate)
    return _edge_set(weights, weights >= c_thresh * a_min)


def score(truth: EdgeSet, inferred: EdgeSet, errors: Optional[ParameterErrors] = None) -> ScoreReport:
    """Precisão, revocação e F1 sobre arestas dirigidas.

    Convenções: nada inferido -> precisão 0; nada verdadeiro -> revocação 1
    se também nada inferido, senão 0; F1 = 0 se algum componente for 0.
    """
    if truth.p != inferred.p:
        raise DimensionMismatchError(f"edge sets differ in p: {truth.p} vs {inferred.p}")

    tp = len(truth.edges & inferred.edges)
    fp = len(inferred.edges - truth.edges)
    fn = len(truth.edges - inferred.edges)

    precision = tp / (tp + fp) if inferred.edges else 0.0
    if truth.edges:
        recall = tp / (tp + fn)
    else:
        recall = 1.0 if not inferred.edges else 0.0
    f1 = 2.0 / (1.0 / recall + 1.0 / precision) if precision > 0 and recall > 0 else 0.0

    return ScoreReport(
        precision=precision,
        recall=recall,
        f1=f1,
        true_positives=tp,
        false_positives=fp,
        false_negatives=fn,
        errors=errors,
    )


def _pair(estimate: np.ndarray, truth: np.ndarray) -> tuple[float, float]:
    diff = np.asarray(estimate) - np.asarray(truth)
    return float(np.max(np.abs(diff))), float(np.linalg.norm(diff))


def parameter_errors(estimate: AnyParams, truth: AnyParams) -> ParameterErrors:
    """Erros por bloco; modelo positivo contra genérico compara Ã com zero"""
    if estimate.p != truth.p:
        raise DimensionMismatchError(f"parameter sets differ in p: {estimate.p} vs {truth.p}")
    zeros = np.zeros((truth.p, truth.p))
    est_tilde = np.asarray(estimate.A_tilde) if estimate.is_generic else zeros
    true_tilde = np.asarray(truth.A_tilde) if truth.is_generic else zeros

    max_A, frob_A = _pair(estimate.A, truth.A)
    max_At, frob_At = _pair(est_tilde, true_tilde)
    max_b, frob_b = _pair(estimate.b, truth.b)
    max_rho, frob_rho = _pair(estimate.rho_w, truth.rho_w)
    return ParameterErrors(
        max_abs_A=max_A,
        frob_A=frob_A,
        max_abs_A_tilde=max_At,
        frob_A_tilde=frob_At,
        max_abs_b=max_b,
        frob_b=frob_b,
        max_abs_rho=max_rho,
        frob_rho=frob_rho,
    )


def evaluate_estimate(estimate: AnyParams, truth: AnyParams, a_min: float, c_thresh: float) -> ScoreReport:
    report = score(true_edges(truth), infer_edges(estimate, a_min, c_thresh), parameter_errors(estimate, truth))
    logger.info(f"📊 F1={report.f1:.3f} (precisão={report.precision:.3f}, revocação={report.recall:.3f})")
    return report
