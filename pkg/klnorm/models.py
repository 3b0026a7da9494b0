"""
models.py
Modelos de domínio (Pydantic): histograma, tabela de frequências, tickets, janela,
relatórios de normalização e resultados do oráculo.
"""
from typing import List, Dict, Optional, Tuple
from pydantic import BaseModel, Field, validator, root_validator

from .schemas import TicketKind, Family
from .errors import TargetNotPowerOfTwoError

U64_LIMIT = 1 << 64

# Limiares de arredondamento do passe rápido FSE (frações * 2^20) para estimativas 1..7
FSE_RTB = (472907, 504365, 521142, 549454, 700449, 749732, 830472)


class _Frozen(BaseModel):
    class Config:
        allow_mutation = False


class Histogram(_Frozen):
    """Contagens empíricas c, total N e suporte S (índices com contagem positiva)."""
    counts: List[int]
    total: int
    support: List[int]
    support_size: int

    @validator("counts", each_item=True)
    def count_in_range(cls, v):
        if v < 0 or v >= U64_LIMIT:
            raise ValueError("counts must be nonnegative 64-bit integers")
        return v

    @root_validator(skip_on_failure=True)
    def check_totals(cls, values):
        counts = values["counts"]
        if values["total"] != sum(counts) or values["total"] <= 0:
            raise ValueError("total must equal the (positive) sum of counts")
        if values["support"] != [a for a, c in enumerate(counts) if c > 0]:
            raise ValueError("support must list the positive-count indices in ascending order")
        if values["support_size"] != len(values["support"]):
            raise ValueError("support_size must equal len(support)")
        return values

    @property
    def support_counts(self) -> List[int]:
        return [self.counts[a] for a in self.support]


class FreqTable(_Frozen):
    """Frequências inteiras m com soma igual ao alvo M."""
    freqs: List[int]
    target: int = Field(..., gt=0)

    @validator("freqs", each_item=True)
    def nonnegative(cls, v):
        if v < 0:
            raise ValueError("frequencies must be nonnegative")
        return v

    @root_validator(skip_on_failure=True)
    def sums_to_target(cls, values):
        if sum(values["freqs"]) != values["target"]:
            raise ValueError("frequencies must sum to the target")
        return values


class Ticket(_Frozen):
    """Variação marginal de Φ ao mover uma unidade do símbolo `symbol` no nível `level`."""
    symbol: int = Field(..., ge=0)
    level: int = Field(..., ge=1)
    kind: TicketKind
    count: int = Field(..., gt=0)
    value: float

    @root_validator(skip_on_failure=True)
    def decrement_level(cls, values):
        if values["kind"] == TicketKind.decrement and values["level"] < 2:
            raise ValueError("decrement tickets need level >= 2")
        return values

    @property
    def base(self) -> int:
        """j tal que o valor é c * ln((j+1)/j) (decremento no nível j == incremento em j-1)."""
        return self.level if self.kind == TicketKind.increment else self.level - 1


class Certificate(_Frozen):
    """Veredito da condição de troca marginal; em caso de falha, o par (a, b) violador."""
    ok: bool
    decrement_symbol: Optional[int] = None
    increment_symbol: Optional[int] = None

    @property
    def witness(self) -> Optional[Tuple[int, int]]:
        if self.ok:
            return None
        return (self.decrement_symbol, self.increment_symbol)


class Window(_Frozen):
    """Limites inteiros [L_a, U_a] por símbolo do suporte que contêm todo ótimo de KL."""
    symbols: List[int]
    lower: List[int]
    upper: List[int]
    deficit: int

    @root_validator(skip_on_failure=True)
    def check_bounds(cls, values):
        lower, upper = values["lower"], values["upper"]
        if not (len(values["symbols"]) == len(lower) == len(upper)):
            raise ValueError("window bounds must be support-indexed")
        if any(lo < 1 or lo > up for lo, up in zip(lower, upper)):
            raise ValueError("window bounds must satisfy 1 <= L <= U")
        if values["deficit"] < 0:
            raise ValueError("deficit must be nonnegative")
        return values

    @property
    def width(self) -> int:
        return sum(up - lo for lo, up in zip(self.lower, self.upper))

    def contains(self, freqs: List[int]) -> bool:
        return all(lo <= freqs[a] <= up for a, lo, up in zip(self.symbols, self.lower, self.upper))


class NormReport(_Frozen):
    """Saída de um algoritmo: tabela, Φ, KL (nats), certificado e contadores de operação."""
    algorithm: str
    table: FreqTable
    phi: float
    kl: float
    certificate_ok: bool
    op_counts: Dict[str, int] = Field(default_factory=dict)
    pre_fixup: Optional[FreqTable] = None
    fallback_taken: Optional[bool] = None

    @property
    def freqs(self) -> List[int]:
        return self.table.freqs


class OracleResult(_Frozen):
    best_phi: float
    optima: List[FreqTable]
    enumerated: int


class ComparatorAgreement(_Frozen):
    """Resumo do cruzamento entre os comparadores float64 e exato."""
    pairs: int
    near_ties: int
    near_tie_disagreements: int
    disagreements: int


class DistSpec(_Frozen):
    family: Family
    r: int = Field(..., ge=1)
    N: int = Field(..., ge=1)
    p: Optional[float] = None
    s: Optional[float] = None

    @root_validator(skip_on_failure=True)
    def family_parameters(cls, values):
        family = values["family"]
        if family == Family.geometric:
            p = values.get("p")
            if p is None or not 0.0 < p < 1.0:
                raise ValueError("geometric needs 0 < p < 1")
        if family == Family.zipf:
            s = values.get("s")
            if s is None or s <= 0.0:
                raise ValueError("zipf needs s > 0")
        return values

    @property
    def label(self) -> str:
        if self.family == Family.geometric:
            return f"geom{self.p:g}"
        if self.family == Family.zipf:
            return f"zipf{self.s:.1f}"
        if self.family == Family.sparse_heavy:
            return "sparse"
        return self.family.value


class FseConfig(_Frozen):
    """Constantes do passe rápido FSE e do fallback M2 para um par (N, M)."""
    reciprocal_shift: int = 62
    table_log: int
    rtb: List[int] = Field(default_factory=lambda: list(FSE_RTB))
    low_threshold: int
    m2_mid_threshold: int
    half_step: int

    @validator("rtb")
    def seven_thresholds(cls, v):
        if len(v) != 7:
            raise ValueError("rtb needs one threshold per estimate 1..7")
        return v

    @classmethod
    def for_instance(cls, total: int, target: int) -> "FseConfig":
        if target <= 0 or target & (target - 1):
            raise TargetNotPowerOfTwoError(f"target {target} is not a power of two")
        table_log = target.bit_length() - 1
        return cls(
            table_log=table_log,
            low_threshold=total >> table_log,
            m2_mid_threshold=(total * 3) >> (table_log + 1),
            half_step=(1 << (61 - table_log)) - 1,
        )

    def round_up_threshold(self, estimate: int) -> int:
        """Resto mínimo (em unidades de 2^(62-L)) para arredondar `estimate` para cima."""
        if estimate <= 0:
            return 0
        return self.rtb[estimate - 1] << (self.reciprocal_shift - self.table_log - 20)
