import logging

from fastapi import APIRouter, HTTPException

from app.core.config import settings
from app.core.exceptions import BarError
from app.schemas.api import ExactRequest, ExactResponse, ScoreRequest, ScoreResponse
from app.services.evaluation_service import infer_edges, parameter_errors, score, true_edges
from app.services.exact_service import build_chain, entropy_rate

router = APIRouter(tags=["Analysis"])
logger = logging.getLogger(__name__)


@router.post("/exact", response_model=ExactResponse, response_model_exclude_none=True)
def exact_analysis(body: ExactRequest):
    """
    Oráculo exato: π, taxa de entropia e (opcional) a matriz P.
    Restrito a p pequeno na API.
    """
    try:
        params = body.params.to_params()
        if params.p > settings.api_max_exact_p:
            raise HTTPException(status_code=400, detail=f"exact analysis over HTTP supports p <= {settings.api_max_exact_p}")
        chain = build_chain(params)
        return ExactResponse(
            p=chain.p,
            pi=chain.pi.tolist(),
            entropy_rate=entropy_rate(chain),
            power_iterations=chain.power_iterations,
            P=chain.P.tolist() if body.include_matrix else None,
        )

    except HTTPException:
        raise
    except (BarError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"❌ Erro na análise exata: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@router.post("/scores", response_model=ScoreResponse)
def score_estimate(body: ScoreRequest):
    """Precisão, revocação, F1 e erros de parâmetro de uma estimativa"""
    try:
        truth = body.truth.to_params()
        estimate = body.estimate.to_params()
        a_min = settings.a_min if body.a_min is None else body.a_min
        c_thresh = settings.c_thresh if body.c_thresh is None else body.c_thresh
        truth_edges = true_edges(truth)
        inferred = infer_edges(estimate, a_min, c_thresh)
        report = score(truth_edges, inferred, parameter_errors(estimate, truth))
        return ScoreResponse(
            **report.model_dump(),
            true_edges=sorted(truth_edges.edges),
            inferred_edges=sorted(inferred.edges),
        )

    except (BarError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"❌ Erro ao pontuar estimativa: {e}")
        raise HTTPException(status_code=500, detail=str(e))
