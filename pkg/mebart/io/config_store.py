from __future__ import annotations
import copy
import json
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from mebart.core import SamplerConfig
from mebart.synthetic import ScenarioSpec, TrueFunction
from mebart.util import Method, Outcome, SigmaHat, UsageError

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / 'assets' / 'configs' / 'default.json'


class _Strict(BaseModel):
    model_config = ConfigDict(extra='forbid')


class ScenarioModel(_Strict):
    """
    A synthetic design. Each value of `sigma_e` is a separate noise level of the sweep.
    """
    function: TrueFunction = TrueFunction.INDICATOR
    n_train: int = Field(100, ge=10)
    n_test: int = Field(100, ge=1)
    mu_x: float | None = None
    sigma_x: float = Field(0.3, gt=0)
    sigma_e: list[float] = Field(default_factory=lambda: [0.1])
    sigma_y: float = Field(0.1, ge=0)
    slope: float = 1.0

    @field_validator('sigma_e', mode='before')
    @classmethod
    def _as_levels(cls, value):
        return [value] if isinstance(value, (int, float)) else value

    @field_validator('sigma_e')
    @classmethod
    def _non_negative(cls, value: list[float]) -> list[float]:
        if not value or any(v < 0 for v in value):
            raise ValueError('sigma_e needs at least one non-negative level')
        return value

    def specs(self, seed: int = 0) -> list[ScenarioSpec]:
        """One ScenarioSpec per noise level."""
        fields = self.model_dump(exclude={'sigma_e'}, exclude_none=True)
        return [ScenarioSpec.preset(sigma_e=level, seed=seed, **fields) for level in self.sigma_e]


class PriorModel(_Strict):
    """
    Prior settings. Unset values are calibrated from the data; per-predictor lists override the
    empirical-Bayes latent prior and the random-walk scales.
    """
    m: int = Field(200, ge=1)
    k: float = Field(2.0, gt=0)
    alpha: float = Field(0.95, gt=0, lt=1)
    beta: float = Field(2.0, gt=0)
    nu: float = Field(3.0, gt=0)
    q: float = Field(0.90, gt=0, lt=1)
    n_min: int = Field(1, ge=1)
    lam: float | None = Field(None, gt=0)
    sigma2_hat: float | None = Field(None, gt=0)
    leaf_range: float | None = Field(None, gt=0)
    mu_x: list[float] | None = None
    sigma2_x: list[float] | None = None
    proposal_scale: list[float] | None = None
    proposal_multiplier: float = Field(1.0, gt=0)
    sigma_hat: SigmaHat = SigmaHat.VARIANCE

    def overrides(self) -> dict:
        """HyperParams fields set explicitly, lists turned into tuples."""
        values = self.model_dump(exclude={'proposal_multiplier', 'sigma_hat'}, exclude_none=True)
        return {key: tuple(value) if isinstance(value, list) else value for key, value in values.items()}


class SamplerModel(_Strict):
    n_burn: int = Field(200, ge=0)
    n_keep: int = Field(1000, ge=1)
    thin: int = Field(1, ge=1)
    n_chains: int = Field(1, ge=1)
    n_cuts: int = Field(100, ge=1)
    debug_every: int = Field(0, ge=0)
    keep_trees: bool = True
    keep_latent: bool = True

    def to_sampler_config(self, method: Method, outcome: Outcome, seed: int, progress: bool = False) -> SamplerConfig:
        return SamplerConfig(method=method, outcome=outcome, seed=seed, progress=progress, **self.model_dump())


class ExperimentConfig(_Strict):
    """
    One resolved experiment: what data, which methods, which priors and how long to sample.
    """
    scenarios: list[ScenarioModel] = Field(default_factory=list)
    data: str | None = None
    test_data: str | None = None
    sigma_e: float | list[float] | None = None
    methods: list[Method] = Field(default_factory=lambda: [Method.BART, Method.MEBART])
    outcome: Outcome | None = None
    prior: PriorModel = Field(default_factory=PriorModel)
    sampler: SamplerModel = Field(default_factory=SamplerModel)
    replicates: int = Field(1, ge=1)
    seed: int = Field(0, ge=0)
    output_dir: str = 'results'

    @field_validator('methods')
    @classmethod
    def _distinct_methods(cls, value: list[Method]) -> list[Method]:
        if not value or len(set(value)) != len(value):
            raise ValueError('methods must be a non-empty list without repeats')
        return value

    def to_json(self) -> dict:
        return self.model_dump(mode='json')

    def clone(self, **kwargs) -> ExperimentConfig:
        """Copy with top-level fields replaced and re-validated."""
        return validate_experiment({**self.to_json(), **kwargs})


def validate_experiment(values: dict, name: str = '<experiment>') -> ExperimentConfig:
    """
    :raises UsageError: listing every invalid or unknown key
    """
    try:
        return ExperimentConfig.model_validate(values)
    except ValidationError as e:
        problems = '; '.join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise UsageError(f"Invalid experiment '{name}': {problems}") from None


def deep_merge(parent: dict, child: dict) -> dict:
    """
    Merge `child` over `parent`. Nested tables merge key by key, every other value (lists
    included) is replaced.
    """
    merged = copy.deepcopy(parent)
    for key, value in child.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class ExperimentBook:
    """
    Named experiments loaded from one configuration document.
    """

    def __init__(self, name: str, experiments: dict[str, ExperimentConfig] = None, root_name: str = None):
        self.__name: str = name
        self.__experiments: dict[str, ExperimentConfig] = experiments or {}
        self.__root_name = root_name

    def get(self, name: str | None = None) -> ExperimentConfig:
        """
        Get an experiment by name, the root one when no name is given.
        :raises UsageError: if the experiment is not found
        """
        name = name or self.__root_name
        if name not in self.__experiments:
            raise UsageError(f"Experiment '{name}' not found in '{self.__name}'. "
                             f"Available: {', '.join(self.experiment_names)}.")
        return self.__experiments[name]

    @property
    def name(self) -> str:
        return self.__name

    @property
    def experiment_names(self) -> list[str]:
        return list(self.__experiments.keys())


class ConfigStore:
    __current: ExperimentBook | None = None

    @staticmethod
    def current() -> ExperimentBook:
        """
        Get the current book, loading the bundled presets on first use.
        """
        if ConfigStore.__current is None:
            ConfigStore.load_default()
        return ConfigStore.__current

    @staticmethod
    def load_default() -> ExperimentBook:
        """
        Load the bundled presets and make them current.
        """
        book = ConfigStore.load(DEFAULT_CONFIG_PATH)
        ConfigStore.__current = book
        return book

    @staticmethod
    def load(path: str | Path) -> ExperimentBook:
        """
        Load a configuration document.
        Values of the form "$name" are replaced by the document's variables, at any depth. An entry
        named "parent>child" inherits from "parent"; any other entry inherits from the root entry.
        Every entry is validated after inheritance.
        :param path: Path to the JSON document
        :return: The loaded book
        :raises UsageError: If the document is malformed or an entry is invalid
        """

        def resolve_variables(value):
            """Replace variable references, recursively."""
            if isinstance(value, str) and value.startswith('$'):
                var_name = value[1:]
                if var_name not in variables:
                    raise UsageError(f"Variable '{var_name}' not found in configuration variables.")
                return resolve_variables(variables[var_name])
            if isinstance(value, dict):
                return {key: resolve_variables(item) for key, item in value.items()}
            if isinstance(value, list):
                return [resolve_variables(item) for item in value]
            return value

        with open(path) as file:
            try:
                data = json.load(file)
            except json.JSONDecodeError as e:
                raise UsageError(f"{path} is not valid JSON: {e}") from None

        try:
            book_name = data['name']
            root_name = data.get('root', None)
            variables: dict = data.get('variables', dict())
            json_entries: dict = data['experiments']
        except (KeyError, TypeError, AttributeError):
            raise UsageError("Invalid configuration file. It must have a name and one or several experiments.") from None

        if root_name is not None and root_name not in json_entries:
            raise UsageError(f"Root experiment '{root_name}' not found.")

        cache: dict[str, dict] = {}

        def resolve_entry(name: str) -> dict:
            """Resolve an entry and its ancestors, using the cache to avoid re-computation."""
            if name in cache:
                return cache[name]

            own = resolve_variables(json_entries[name])
            if '>' in name:
                parent_name = '>'.join(name.split('>')[:-1])
            elif name != root_name:
                parent_name = root_name
            else:
                parent_name = None

            if parent_name:
                if parent_name not in json_entries:
                    raise UsageError(f"Parent experiment '{parent_name}' not found for '{name}'.")
                merged = deep_merge(resolve_entry(parent_name), own)
            else:
                merged = own

            cache[name] = merged
            return merged

        experiments = {name: validate_experiment(resolve_entry(name), name) for name in json_entries.keys()}
        return ExperimentBook(book_name, experiments, root_name)
