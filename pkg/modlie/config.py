import os


class Config(object):
    """
    Runtime settings shared by constructors, searches and the CLI. Every public operation that depends on one of these
    accepts an optional ``config`` argument and falls back to :py:data:`DEFAULT_CONFIG`.
    """

    def __init__(self, dim_cap=400, seed=20190901, restarts=32, samples_per_step=16, period_cap=4096,
                 allow_small_primes=False, dense_jacobi_limit=64, jacobi_samples=2000):
        """
        :param int dim_cap: Largest algebra dimension a constructor will build.
        :param int seed: Default RNG seed for searches and random checks.
        :param int restarts: Number of restarts of the maximal torus search.
        :param int samples_per_step: Centralizer samples tried before a search step gives up.
        :param int period_cap: Longest p-power orbit followed before giving up on a semisimple part.
        :param bool allow_small_primes: Permit p = 2, 3.
        :param int dense_jacobi_limit: Above this dimension the Jacobi identity is checked on sampled triples.
        :param int jacobi_samples: Number of sampled triples for large algebras.
        """
        self.dim_cap = dim_cap
        self.seed = seed
        self.restarts = restarts
        self.samples_per_step = samples_per_step
        self.period_cap = period_cap
        self.allow_small_primes = allow_small_primes
        self.dense_jacobi_limit = dense_jacobi_limit
        self.jacobi_samples = jacobi_samples

        super(Config, self).__init__()

    @classmethod
    def from_env(cls, environ=None, **kwargs):
        """
        Builds a config honoring ``MODLIE_SEED`` and ``MODLIE_DIM_CAP``; explicit keyword arguments win.
        """
        environ = os.environ if environ is None else environ
        if "MODLIE_SEED" in environ and "seed" not in kwargs:
            kwargs["seed"] = int(environ["MODLIE_SEED"])
        if "MODLIE_DIM_CAP" in environ and "dim_cap" not in kwargs:
            kwargs["dim_cap"] = int(environ["MODLIE_DIM_CAP"])
        return cls(**kwargs)

    def replace(self, **kwargs):
        values = dict(self.__dict__)
        values.update(kwargs)
        return Config(**values)


DEFAULT_CONFIG = Config()
