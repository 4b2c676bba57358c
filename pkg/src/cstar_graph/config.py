from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class EngineConfig:
    # largest k for which u_k = u phi(u) ... phi^{k-1}(u) is cached
    uk_cache_cap: int = 16
    # invariance sanity check depth for masa_check (words |mu| <= depth)
    masa_depth: int = 3
    # extra words depth for check_D_into_F beyond (longest word in u) + 1
    extra_depth: int = 0
    # candidate budget for inverse_search before giving up
    inverse_budget: int = 500_000
    # process pool size for ratio scans; 1 runs in-process
    workers: int = 1


DEFAULT_CONFIG = EngineConfig()
