import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from app.models.params import AnyParams, SpaceConfig
from app.schemas.params import ParamsDocument

logger = logging.getLogger(__name__)


def read_params_document(path: str | Path) -> ParamsDocument:
    with open(path, "r", encoding="utf-8") as handle:
        return ParamsDocument.model_validate(json.load(handle))


def load_params(path: str | Path) -> Tuple[AnyParams, SpaceConfig]:
    """Lê (parâmetros, configuração do espaço) de um arquivo JSON"""
    document = read_params_document(path)
    return document.to_params(), document.to_config()


def write_params_document(document: ParamsDocument, path: str | Path) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(document.dump(), encoding="utf-8")
    logger.info(f"💾 Parâmetros salvos em {path}")
    return str(path)


def save_params(params: AnyParams, config: SpaceConfig, path: str | Path,
                diagnostics: Optional[Dict[str, Any]] = None) -> str:
    return write_params_document(ParamsDocument.from_params(params, config, diagnostics), path)
