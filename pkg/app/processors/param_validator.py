from typing import List

import numpy as np

from app.core.config import settings
from app.core.exceptions import DimensionMismatchError
from app.interfaces.data_interfaces import DataValidator
from app.models.params import AnyParams, GenericBarParams, SpaceConfig, ValidationReport


class ParamsValidator(DataValidator):
    """Validador das restrições de Θ (modelo positivo) e Θ̃ (genérico)"""

    def __init__(self, tolerance: float | None = None):
        self.tolerance = settings.validation_tolerance if tolerance is None else tolerance

    def validate(self, params: AnyParams, config: SpaceConfig) -> ValidationReport:
        if params.p != config.p:
            raise DimensionMismatchError(f"params have p={params.p}, config expects p={config.p}")

        tol = self.tolerance
        errors: List[str] = []
        A = np.asarray(params.A)
        A_tilde = np.asarray(params.A_tilde) if isinstance(params, GenericBarParams) else None
        weights = A if A_tilde is None else A + A_tilde
        row_sums = weights.sum(axis=1) + params.b

        for i in range(config.p):
            # 1. Soma da linha
            if abs(row_sums[i] - 1.0) > tol:
                errors.append(f"row {i} sum ≠ 1 (got {row_sums[i]:.15g})")

            # 2. Não negatividade
            negative = np.flatnonzero(A[i] < -tol)
            if negative.size:
                errors.append(f"row {i} A has negative entries at columns {negative.tolist()}")
            if A_tilde is not None:
                negative = np.flatnonzero(A_tilde[i] < -tol)
                if negative.size:
                    errors.append(f"row {i} A_tilde has negative entries at columns {negative.tolist()}")
                # 3. Suportes disjuntos
                overlap = np.flatnonzero((A[i] > tol) & (A_tilde[i] > tol))
                if overlap.size:
                    errors.append(f"row {i} A and A_tilde overlap at columns {overlap.tolist()}")

            # 4. Ruído
            if params.b[i] < config.b_min - tol:
                errors.append(f"row {i} b={params.b[i]:.15g} < b_min={config.b_min}")
            rho = params.rho_w[i]
            if rho < config.rho_min - tol or rho > config.rho_max + tol:
                errors.append(f"row {i} rho_w={rho:.15g} outside [{config.rho_min}, {config.rho_max}]")

        return ValidationReport(is_valid=not errors, errors=errors)

    def is_valid(self, params: AnyParams, config: SpaceConfig) -> bool:
        return self.validate(params, config).is_valid


def validate(params: AnyParams, config: SpaceConfig) -> ValidationReport:
    return ParamsValidator().validate(params, config)
