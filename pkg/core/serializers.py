"""
Input serializers for command-line run configurations. Validated data is
turned into the numerical value types; there is no API surface.
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from rest_framework import serializers

from core.specs import EnsembleSpec, QuadratureSpec

BETA_CHOICES = [1, 2, 4]
METHOD_CHOICES = ['analytic', 'mc', 'superint']
FORMAT_CHOICES = ['csv', 'json']


def parse_grid(spec: str) -> np.ndarray:
    """
    'lo:hi:step' -> lo, lo + step, ... up to hi (hi included when it lies on
    the grid within step/2; points at or past hi + step/2 are dropped).
    """
    parts = spec.split(':')
    if len(parts) != 3:
        raise ValueError(f"Grid must look like lo:hi:step (got '{spec}').")
    lo, hi, step = (float(p) for p in parts)
    if not all(math.isfinite(v) for v in (lo, hi, step)):
        raise ValueError("Grid bounds must be finite.")
    if step <= 0 or lo >= hi:
        raise ValueError("Grid needs step > 0 and lo < hi.")
    count = int(math.ceil((hi - lo) / step + 0.5))
    return lo + step * np.arange(count)


class EnsembleSerializer(serializers.Serializer):
    beta = serializers.ChoiceField(choices=BETA_CHOICES)
    n = serializers.IntegerField(min_value=1)


class GridSerializer(serializers.Serializer):
    grid = serializers.CharField()

    def validate_grid(self, value):
        try:
            return parse_grid(value)
        except ValueError as e:
            raise serializers.ValidationError(str(e))


class MonteCarloSerializer(serializers.Serializer):
    samples = serializers.IntegerField(min_value=100, required=False, allow_null=True)
    seed = serializers.IntegerField(min_value=0, max_value=2 ** 64 - 1, required=False, allow_null=True)
    eta = serializers.FloatField(required=False, allow_null=True)
    workers = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    richardson = serializers.BooleanField(default=False)

    def validate_eta(self, value):
        if value is not None and not value > 0:
            raise serializers.ValidationError("eta must be positive.")
        return value


class QuadratureSerializer(serializers.Serializer):
    abs_tol = serializers.FloatField(required=False, allow_null=True)
    rel_tol = serializers.FloatField(required=False, allow_null=True)

    def validate(self, data):
        for key in ('abs_tol', 'rel_tol'):
            value = data.get(key)
            if value is not None and not value > 0:
                raise serializers.ValidationError({key: "Tolerance must be positive."})
        return data


@dataclass
class RunConfig:
    method: str = 'analytic'
    fmt: str = 'csv'
    out: Optional[str] = None
    ensemble: Optional[EnsembleSpec] = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec.default)
    mc: dict = field(default_factory=dict)


class RunConfigSerializer(serializers.Serializer):
    """
    One subcommand invocation. `ensemble` is optional for subcommands that
    loop over all three ensembles.
    """
    method = serializers.ChoiceField(choices=METHOD_CHOICES, default='analytic')
    format = serializers.ChoiceField(choices=FORMAT_CHOICES, default='csv')
    out = serializers.CharField(required=False, allow_null=True)
    ensemble = EnsembleSerializer(required=False, allow_null=True)
    mc = MonteCarloSerializer(required=False)
    quadrature = QuadratureSerializer(required=False)

    def create(self, validated_data) -> RunConfig:
        ensemble = validated_data.get('ensemble')
        tolerances = {k: v for k, v in (validated_data.get('quadrature') or {}).items() if v is not None}
        defaults = QuadratureSpec.default()
        return RunConfig(
            method=validated_data['method'],
            fmt=validated_data['format'],
            out=validated_data.get('out'),
            ensemble=EnsembleSpec(ensemble['beta'], ensemble['n']) if ensemble else None,
            quadrature=QuadratureSpec(
                abs_tol=tolerances.get('abs_tol', defaults.abs_tol),
                rel_tol=tolerances.get('rel_tol', defaults.rel_tol),
                max_subdivisions=defaults.max_subdivisions,
                eta_ladder=defaults.eta_ladder,
            ),
            mc=dict(validated_data.get('mc') or {}),
        )
