"""
config.py
Lê variáveis de ambiente e centraliza configurações do klnorm.
"""
import os
from dotenv import load_dotenv

load_dotenv()


def _int_list(name: str, default: str):
    return [int(float(x)) for x in os.getenv(name, default).split(",") if x.strip()]


LOG_LEVEL = os.getenv("KLNORM_LOG_LEVEL", "WARNING")

# Oráculo exaustivo: número máximo de composições enumeradas
ORACLE_LIMIT = int(os.getenv("KLNORM_ORACLE_LIMIT", "10000000"))

# Orçamento do comparador exato (inteiros de precisão arbitrária)
EXACT_MAX_COUNT = int(os.getenv("KLNORM_EXACT_MAX_COUNT", "1000000"))
EXACT_MAX_LEVEL = int(os.getenv("KLNORM_EXACT_MAX_LEVEL", str(1 << 20)))
# Gap relativo acima do qual a comparação em float64 já é conclusiva
FLOAT_GUARD_REL = float(os.getenv("KLNORM_FLOAT_GUARD_REL", "1e-13"))
# Gap relativo abaixo do qual divergências float64/exato são apenas registradas
AGREEMENT_REL_TOL = float(os.getenv("KLNORM_AGREEMENT_REL_TOL", "1e-9"))

# Tolerâncias de verificação
KL_REL_TOL = float(os.getenv("KLNORM_KL_REL_TOL", "1e-12"))
PHI_ABS_TOL = float(os.getenv("KLNORM_PHI_ABS_TOL", "1e-12"))

# Tabela de log(1 + 1/j) e cauda ('log1p' ou 'taylor')
LOG_TABLE_SIZE = int(os.getenv("KLNORM_LOG_TABLE_SIZE", "4096"))
LOG_TAIL = os.getenv("KLNORM_LOG_TAIL", "log1p").lower()

# Perfis de implementação: 'smart' (padrão) ou 'basic'
SELECT_STRATEGY = os.getenv("KLNORM_SELECT_STRATEGY", "quickselect").lower()
BLOOM_PROFILE = os.getenv("KLNORM_BLOOM_PROFILE", "smart").lower()

# Caminho Lagrangiano (threshold_window)
THRESHOLD_ROUNDS = int(os.getenv("KLNORM_THRESHOLD_ROUNDS", "18"))
THRESHOLD_REFINE_STEPS = int(os.getenv("KLNORM_THRESHOLD_REFINE_STEPS", "8"))
THRESHOLD_RESIDUAL_FACTOR = int(os.getenv("KLNORM_THRESHOLD_RESIDUAL_FACTOR", "4"))

# Despacho de window_auto: cv^2 < gate ou N <= gate * M -> núcleo de tickets
WINDOW_CV2_GATE = float(os.getenv("KLNORM_WINDOW_CV2_GATE", "1024"))
WINDOW_NM_GATE = int(os.getenv("KLNORM_WINDOW_NM_GATE", "4"))

# Benchmark (relógio de parede, melhor de K)
BENCH_REPEATS = int(os.getenv("KLNORM_BENCH_REPEATS", "50"))
BENCH_WARMUPS = int(os.getenv("KLNORM_BENCH_WARMUPS", "5"))
BENCH_BOTTOM_UP_REPEATS = int(os.getenv("KLNORM_BENCH_BOTTOM_UP_REPEATS", "3"))

# Grade do sweep (escala de mesa; flags da CLI chegam à grade completa)
SWEEP_WORKERS = int(os.getenv("KLNORM_SWEEP_WORKERS", "4"))
SWEEP_R = _int_list("KLNORM_SWEEP_R", "64,256,1024,4096")
SWEEP_N = _int_list("KLNORM_SWEEP_N", "1000000")
SWEEP_M = int(os.getenv("KLNORM_SWEEP_M", str(1 << 20)))

# Suíte de validação
VALIDATE_SEED = int(os.getenv("KLNORM_VALIDATE_SEED", "20240601"))
VALIDATE_CASES = int(os.getenv("KLNORM_VALIDATE_CASES", "10000"))
VALIDATE_SWEEP_R = _int_list("KLNORM_VALIDATE_SWEEP_R", "64,256,1024,4096")
VALIDATE_SWEEP_N = _int_list("KLNORM_VALIDATE_SWEEP_N", "1000000,1000000000")
# Um ou mais alvos; células com r > M são descartadas
VALIDATE_SWEEP_M = _int_list("KLNORM_VALIDATE_SWEEP_M", "1048576,16384")
