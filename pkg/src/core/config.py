# src/core/config
"""
Конфигурация допусков, бюджетов и параллелизма (переменные окружения KLAB_*)
"""
import os
from dotenv import load_dotenv

load_dotenv()

# Допуски
ALGEBRAIC_TOL = float(os.getenv("KLAB_ALGEBRAIC_TOL", "1e-9"))
GEOMETRIC_TOL = float(os.getenv("KLAB_GEOMETRIC_TOL", "1e-6"))
EQUALITY_TOL = float(os.getenv("KLAB_EQUALITY_TOL", "1e-7"))
HASH_GRID = float(os.getenv("KLAB_HASH_GRID", "1e-6"))
POINT_TOL = float(os.getenv("KLAB_POINT_TOL", "1e-10"))

# Окна и пороги экспериментов
T_MAX = float(os.getenv("KLAB_T_MAX", "1e4"))
K_CAP = float(os.getenv("KLAB_K_CAP", "1e3"))
RATIONAL_BOUND = int(os.getenv("KLAB_RATIONAL_BOUND", "1000000"))
BALL_BUDGET = int(os.getenv("KLAB_BALL_BUDGET", "200000"))
TREND_FACTOR = float(os.getenv("KLAB_TREND_FACTOR", "10"))

THREADS = max(1, int(os.getenv("KLAB_THREADS", str(os.cpu_count() or 1))))
LOG_LEVEL = os.getenv("KLAB_LOG_LEVEL", "INFO").upper()

APP_VERSION = os.getenv("APP_VERSION", "1.0.0")
