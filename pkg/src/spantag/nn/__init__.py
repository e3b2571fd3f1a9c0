from .optim import Adam, AdamConfig
from .params import ParamStore, make_rng, split_rng

__all__ = ["Adam", "AdamConfig", "ParamStore", "make_rng", "split_rng"]
