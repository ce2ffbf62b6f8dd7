import logging

from fastapi import APIRouter, HTTPException

from app.core.exceptions import BarError
from app.models.estimate import OptimizerOptions
from app.models.params import SpaceConfig
from app.models.trajectory import Trajectory
from app.schemas.api import EstimateRequest
from app.schemas.params import ParamsDocument
from app.services.estimation_service import get_estimator
from app.services.stats_service import count_transitions

router = APIRouter(prefix="/estimates", tags=["Estimation"])
logger = logging.getLogger(__name__)


@router.post("", response_model=ParamsDocument, response_model_exclude_none=True)
def estimate_parameters(body: EstimateRequest):
    """
    Estima θ (ML ou forma fechada) a partir de uma trajetória observada.
    A resposta segue o esquema dos arquivos de parâmetros, com `diagnostics`.
    """
    try:
        counts = count_transitions(Trajectory(states=body.states))
        config = SpaceConfig.default(counts.p, b_min=body.b_min, rho_min=body.rho_min, rho_max=body.rho_max)
        opts = OptimizerOptions(**({"solver": body.solver} if body.solver else {}))
        estimator = get_estimator(body.method, generic=body.variant == "generic", opts=opts,
                                  shared_noise=body.shared_noise)
        result = estimator.estimate(counts, config)
        return ParamsDocument.from_estimate(result, config)

    except (BarError, ValueError) as e:
        logger.warning(f"⚠️ Estimação recusada: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"❌ Erro na estimação: {e}")
        raise HTTPException(status_code=500, detail=str(e))
