class BarError(Exception):
    """Raiz das falhas do toolkit BAR"""


class DimensionMismatchError(BarError):
    """Matriz/vetor com dimensão incompatível com p"""


class DomainError(BarError, ValueError):
    """Probabilidade fora de (0,1) num estado visitado"""

    def __init__(self, message: str, node: int | None = None, state: int | None = None):
        super().__init__(message)
        self.node = node
        self.state = state


class InfiniteDivergenceError(DomainError):
    """q_i > 0 com p_i = 0 na divergência KL"""


class SingularNoiseError(BarError, ValueError):
    """Algum b_i = 0 impede recuperar ρ_w = c / b"""


class PreconditionError(BarError):
    """Pré-condição de uma operação não satisfeita"""


class NoTransitionsError(PreconditionError, ValueError):
    pass


class ZeroStateUnvisitedError(PreconditionError):
    pass


class RankDeficientError(PreconditionError):
    def __init__(self, message: str, rank: int, p: int):
        super().__init__(message)
        self.rank = rank
        self.p = p


class InfeasibleSpecError(PreconditionError, ValueError):
    pass


class StateSpaceTooLargeError(PreconditionError):
    def __init__(self, p: int, limit: int):
        super().__init__(f"exact analysis supports p <= {limit}, got p={p}")
        self.p = p
        self.limit = limit


class StationaryMismatchError(BarError):
    """Os dois métodos de distribuição estacionária discordam"""
