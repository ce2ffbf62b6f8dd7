import logging

from fastapi import APIRouter, HTTPException

from app.core.config import settings
from app.core.exceptions import BarError
from app.models.params import GraphSpec, SpaceConfig
from app.processors.param_validator import ParamsValidator
from app.schemas.api import GenerateRequest, ValidationResponse
from app.schemas.params import ParamsDocument
from app.services.simulation_service import generate_graph

router = APIRouter(prefix="/networks", tags=["Networks"])
logger = logging.getLogger(__name__)

validator = ParamsValidator()


@router.post("/generate", response_model=ParamsDocument, response_model_exclude_none=True)
def generate_network(body: GenerateRequest):
    """
    Gera uma rede BAR verdadeira (positiva ou genérica) a partir da seed.
    """
    try:
        config = SpaceConfig.default(body.p, b_min=body.b_min, rho_min=body.rho_min, rho_max=body.rho_max)
        a_min = settings.a_min if body.a_min is None else body.a_min
        spec = GraphSpec(p=body.p, d_max=body.d_max, a_min=a_min, signed=body.signed)
        params = generate_graph(spec, config, body.seed)
        return ParamsDocument.from_params(params, config)

    except (BarError, ValueError) as e:
        logger.warning(f"⚠️ Geração recusada: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"❌ Erro ao gerar rede: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@router.post("/validate", response_model=ValidationResponse)
def validate_network(document: ParamsDocument):
    """Valida um documento de parâmetros contra Θ / Θ̃ da sua configuração"""
    try:
        report = validator.validate(document.to_params(), document.to_config())
        return ValidationResponse(is_valid=report.is_valid, errors=report.errors)

    except (BarError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"❌ Erro ao validar parâmetros: {e}")
        raise HTTPException(status_code=500, detail=str(e))
