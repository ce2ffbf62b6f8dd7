from abc import ABC, abstractmethod
from typing import Any, Dict, List

from app.models.counts import TransitionCounts
from app.models.estimate import EstimateResult
from app.models.params import SpaceConfig, ValidationReport


class DataValidator(ABC):
    """Interface para validação de parâmetros contra o espaço configurado"""

    @abstractmethod
    def validate(self, params: Any, config: SpaceConfig) -> ValidationReport:
        """Valida e devolve o relatório com as restrições violadas"""
        pass

    @abstractmethod
    def is_valid(self, params: Any, config: SpaceConfig) -> bool:
        pass


class Estimator(ABC):
    """Interface comum aos estimadores (ML e forma fechada, positivo e genérico)"""

    name: str = ""
    generic: bool = False

    @abstractmethod
    def estimate(self, counts: TransitionCounts, config: SpaceConfig) -> EstimateResult:
        """Estima θ a partir das estatísticas suficientes"""
        pass


class ResultRepository(ABC):
    """Interface para persistência das linhas de resultado"""

    @abstractmethod
    def save(self, rows: List[Dict[str, Any]]) -> str:
        """Persiste as linhas e devolve o caminho/identificador"""
        pass

    @abstractmethod
    def find_all(self) -> List[Dict[str, Any]]:
        pass


class ExperimentPipeline(ABC):
    """Pipeline gerar -> simular -> estimar -> pontuar de uma célula"""

    @abstractmethod
    def extract(self, cell: Dict[str, Any]) -> Dict[str, Any]:
        """Gera a rede verdadeira e os dados da célula"""
        pass

    @abstractmethod
    def transform(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """Estima e pontua"""
        pass

    @abstractmethod
    def load(self, data: Dict[str, Any]) -> Dict[str, Any]:
        """Formata a linha de resultado"""
        pass

    @abstractmethod
    def execute(self, cell: Dict[str, Any]) -> Dict[str, Any]:
        """Executa a célula completa"""
        pass
