import logging

from fastapi import APIRouter, HTTPException

from app.core.config import settings
from app.core.exceptions import BarError
from app.schemas.api import SimulateRequest, TrajectoryBody
from app.services.simulation_service import simulate

router = APIRouter(prefix="/simulations", tags=["Simulations"])
logger = logging.getLogger(__name__)


@router.post("", response_model=TrajectoryBody)
def simulate_trajectory(body: SimulateRequest):
    """
    Simula x(0..T) a partir dos parâmetros enviados.
    Limita T para não travar o servidor.
    """
    if body.T > settings.api_max_T:
        raise HTTPException(status_code=400, detail=f"T must be <= {settings.api_max_T}")
    try:
        traj = simulate(body.params.to_params(), body.T, body.initial, body.seed)
        return TrajectoryBody(p=traj.p, T=traj.T, states=traj.states.tolist())

    except (BarError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"❌ Erro ao simular trajetória: {e}")
        raise HTTPException(status_code=500, detail=str(e))
