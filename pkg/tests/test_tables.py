import csv

import pytest

from luccsim import (
    ConfigurationError,
    LandUse,
    ParameterTables,
    TechLevel,
    Wgc,
    lookup,
    validate_tables,
)
from luccsim.tables import load_table_overrides

M, S, WS = LandUse.MAIZE, LandUse.SOYBEAN, LandUse.WHEAT_SOY
L, A, H = TechLevel.LOW, TechLevel.AVERAGE, TechLevel.HIGH
VU, U, AV, F, VF = Wgc


def test_spot_values(tables):
    assert lookup(tables, "yield", M, L, VU) == 4.05
    assert lookup(tables, "cost", WS, H, VF) == 892
    assert lookup(tables, "renewability", S, L, VF) == 57.6
    assert lookup(tables, "yield", S, H, VF) == 5.19
    assert lookup(tables, "cost", M, H, VU) == 717
    assert lookup(tables, "renewability", WS, L, AV) == 29.9


def test_scalar_tables(tables):
    assert tables.price_usd_per_t == {M: 141, S: 277, WS: 153}
    assert [tables.alpha_wgc[w] for w in Wgc] == [-0.55, -0.28, 0.00, 0.22, 0.45]
    assert [tables.wct_usd_per_ha[t] for t in TechLevel] == [252, 333, 413]
    assert tables.alpha_bn[(L, H)] == 0.45
    assert tables.alpha_bn[(H, L)] == -0.55
    assert tables.alpha_bn[(A, A)] == 0.0


def test_lookup_is_pure(tables):
    first = lookup(tables, "yield", WS, A, F)
    assert all(
        lookup(tables, "yield", WS, A, F) == first for _ in range(5)
    )


def test_lookup_rejects_unknown_kind(tables):
    with pytest.raises(ConfigurationError):
        lookup(tables, "prices", M, L, VU)


def test_lookup_missing_key_is_configuration_error(tables):
    broken = ParameterTables.from_dicts(
        yield_t_per_ha={
            k: v for k, v in tables.yield_t_per_ha.items() if k != (M, L, VU)
        },
        cost_usd_per_ha=dict(tables.cost_usd_per_ha),
        renewability_pct=dict(tables.renewability_pct),
        price_usd_per_t=dict(tables.price_usd_per_t),
        alpha_wgc=dict(tables.alpha_wgc),
        alpha_bn=dict(tables.alpha_bn),
        wct_usd_per_ha=dict(tables.wct_usd_per_ha),
    )
    with pytest.raises(ConfigurationError):
        lookup(broken, "yield", M, L, VU)


def test_embedded_dataset_validates_clean(tables):
    assert validate_tables(tables) == []


def _with(tables, **replacements):
    fields = {
        "yield_t_per_ha": dict(tables.yield_t_per_ha),
        "cost_usd_per_ha": dict(tables.cost_usd_per_ha),
        "renewability_pct": dict(tables.renewability_pct),
        "price_usd_per_t": dict(tables.price_usd_per_t),
        "alpha_wgc": dict(tables.alpha_wgc),
        "alpha_bn": dict(tables.alpha_bn),
        "wct_usd_per_ha": dict(tables.wct_usd_per_ha),
    }
    fields.update(replacements)
    return ParameterTables.from_dicts(**fields)


def test_zero_yield_is_one_violation(tables):
    broken_yields = dict(tables.yield_t_per_ha)
    broken_yields[(M, L, AV)] = 0.0
    report = validate_tables(_with(tables, yield_t_per_ha=broken_yields))
    positivity = [v for v in report if "non-positive yield" in v]
    assert len(positivity) == 1
    assert "yield[M,L,A]" in positivity[0]


def test_bad_alpha_bn_sign_is_one_violation(tables):
    broken = dict(tables.alpha_bn)
    broken[(L, H)] = -0.1
    report = validate_tables(_with(tables, alpha_bn=broken))
    assert len(report) == 1
    assert "alpha_bn sign" in report[0]
    assert "alpha_bn[L,H]" in report[0]


def test_decreasing_cost_in_weather_is_reported(tables):
    broken = dict(tables.cost_usd_per_ha)
    broken[(S, A, VF)] = 1.0
    report = validate_tables(_with(tables, cost_usd_per_ha=broken))
    assert any("decreasing in weather condition" in v for v in report)


def test_non_increasing_wct_is_reported(tables):
    broken = dict(tables.wct_usd_per_ha)
    broken[H] = broken[A]
    report = validate_tables(_with(tables, wct_usd_per_ha=broken))
    assert report == ["wct[H]: not strictly increasing in tech level"]


def test_csv_override_roundtrip(tables, tmp_path):
    path = tmp_path / "yield.csv"
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["lu", "tl", "wgc", "value"])
        for (lu, tl, wgc), value in tables.yield_t_per_ha.items():
            writer.writerow([lu.code, tl.code, wgc.code, value])
    loaded = load_table_overrides(tables, {"yield": str(path)})
    assert dict(loaded.yield_t_per_ha) == dict(tables.yield_t_per_ha)


def test_partial_csv_override_is_rejected(tables, tmp_path):
    path = tmp_path / "yield.csv"
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["lu", "tl", "wgc", "value"])
        writer.writerow(["M", "L", "VU", "4.05"])
    with pytest.raises(ConfigurationError, match="missing entry"):
        load_table_overrides(tables, {"yield": str(path)})


def test_csv_override_bad_header(tables, tmp_path):
    path = tmp_path / "price.csv"
    path.write_text("landuse,value\nM,141\n")
    with pytest.raises(ConfigurationError, match="expected header"):
        load_table_overrides(tables, {"price": str(path)})


def test_unknown_override_name(tables):
    with pytest.raises(ConfigurationError, match="unknown table override"):
        load_table_overrides(tables, {"yields": "x.csv"})
