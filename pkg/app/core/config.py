from typing import List, Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_prefix="BAR_", extra="ignore")

    # Espaço de parâmetros (persistent excitation)
    b_min: float = 0.2
    rho_min: float = 0.2
    rho_max: float = 0.8

    # Geração de redes sintéticas
    a_min: float = 0.1
    graph_w_max: float = 1.0
    graph_b_cap: float = 0.5
    graph_max_attempts: int = 10_000

    # Inferência de arestas
    c_thresh: float = 0.5

    # Otimizador (ML por nó)
    solver: Literal["pga", "slsqp"] = "pga"
    max_iters: int = 10_000
    grad_tolerance: float = 1e-8
    step_init: float = 1.0
    step_shrink: float = 0.5
    armijo_slope: float = 1e-4

    # Projeção em Θ / Θ̃
    projection_method: Literal["exact", "dykstra"] = "exact"
    projection_tolerance: float = 1e-12
    projection_max_iters: int = 100_000

    # Oráculo exato
    exact_max_p: int = 14
    dense_max_p: int = 12
    stationary_tolerance: float = 1e-12
    stationary_agreement: float = 1e-10
    power_max_iters: int = 1_000_000

    # Álgebra linear / validação
    rank_threshold: float = 1e-10
    validation_tolerance: float = 1e-12

    # Experimentos
    workers: int = 1

    # API
    api_max_T: int = 1_000_000
    api_max_exact_p: int = 10
    allowed_origins_str: str = "*"
    log_level: str = "INFO"

    @property
    def allowed_origins(self) -> List[str]:
        return [origin.strip() for origin in self.allowed_origins_str.split(",")]


settings = Settings()
