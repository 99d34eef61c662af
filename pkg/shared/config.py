import os


def _cpu_count() -> int:
    return os.cpu_count() or 1


class Config:
    ENUMERATION_BOUND = int(os.getenv("GENLOGIC_ENUMERATION_BOUND", "20"))
    SUBSET_BOUND = int(os.getenv("GENLOGIC_SUBSET_BOUND", "16"))
    DECIMAL_PLACES = int(os.getenv("GENLOGIC_DECIMAL_PLACES", "6"))

    CHECK_TRIALS = int(os.getenv("GENLOGIC_CHECK_TRIALS", "1000"))
    CHECK_SEED = int(os.getenv("GENLOGIC_CHECK_SEED", "7"))
    CHECK_MAX_ATOMS = int(os.getenv("GENLOGIC_CHECK_MAX_ATOMS", "4"))
    CHECK_MAX_DEPTH = int(os.getenv("GENLOGIC_CHECK_MAX_DEPTH", "4"))
    CHECK_MAX_DELTA = int(os.getenv("GENLOGIC_CHECK_MAX_DELTA", "4"))

    MAX_WORKERS = int(os.getenv("GENLOGIC_MAX_WORKERS", str(_cpu_count())))
    USE_MULTIPROCESS = os.getenv("GENLOGIC_USE_MULTIPROCESS", "true").lower() in ("true", "1", "yes", "on")

    LOG_LEVEL = os.getenv("GENLOGIC_LOG_LEVEL", "WARNING")
