"""Online-to-batch conversions with last-iterate guarantees (C++ core)."""

try:
    from . import _core
except ImportError:  # running against a build tree
    import _core

globals().update({k: v for k, v in vars(_core).items() if not k.startswith("_")})

_LEARNER_FOR = {"optimistic": "optimistic-ogd", "general-sc": "ftl-sc"}
_LINEAR_BY_DEFAULT = {"optimistic", "accelerated", "general-sc"}


def make_config(algo="anytime", T=1000, seeds=(0,), **options):
    """ExperimentConfig with the CLI's defaults for learner, schedule and noise.

    Keyword options set either a config field (learner, schedule, c, ...) or a
    problem field (kind, dim, B, sigma, noise, ...).
    """
    cfg = _core.ExperimentConfig()
    cfg.algo = algo
    cfg.T = T
    cfg.seeds = list(seeds)
    cfg.learner = _LEARNER_FOR.get(algo, "adaptive-ogd")
    cfg.schedule = "linear" if algo in _LINEAR_BY_DEFAULT else "constant"
    spec = cfg.problem
    for key, value in options.items():
        if hasattr(cfg, key) and key != "problem":
            setattr(cfg, key, value)
        elif hasattr(spec, key):
            setattr(spec, key, value)
        else:
            raise TypeError(f"unknown option {key!r}")
    if spec.sigma > 0 and "noise" not in options:
        spec.noise = "sphere"
    cfg.problem = spec
    cfg.validate()
    return cfg
