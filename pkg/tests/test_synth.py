import calendar
from datetime import date

import pytest

from rptte.ingest import load_dataset
from rptte.records import ConfigError
from rptte.synth import GroundTruth, SynthConfig, generate

from . import oracles


def config(**overrides):
    base = dict(n_taxpayers=120, n_investors=40, n_invoices=1200,
                date_start=date(2014, 1, 1), date_end=date(2014, 12, 31),
                n_planted_groups=3, planted_depth=2, month_end_bias=0.4, seed=5)
    base.update(overrides)
    return SynthConfig(**base)


def is_month_end(d: date) -> bool:
    return d.day > calendar.monthrange(d.year, d.month)[1] - 5


def test_same_seed_twice_identical_files(tmp_path):
    a_dir, b_dir = tmp_path / "a", tmp_path / "b"
    generate(config(), out_dir=a_dir)
    generate(config(), out_dir=b_dir)
    for name in ("taxpayers.csv", "investors.csv", "investments.csv", "invoices.csv",
                 "audits.csv", "manifest.json", "ground_truth.jsonl"):
        assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes(), name


def test_requested_group_count_planted():
    _, truth = generate(config(n_planted_groups=3))
    assert len(truth.groups) == 3
    for g in truth.groups:
        assert set(g.taxpayer_ids) <= set(g.member_ids)
        assert g.owner_id in g.member_ids
        assert set(g.effective_invoice_ids) <= set(g.rpt_invoice_ids)
        assert len(g.taxpayer_ids) >= 2


def test_zero_planted_groups_is_vacuous():
    dataset, truth = generate(config(n_planted_groups=0, n_invoices=500))
    assert truth.groups == []
    assert len(dataset.invoices) == 500


def test_emitted_files_parse_cleanly(tmp_path):
    generate(config(), out_dir=tmp_path)
    dataset = load_dataset(tmp_path)
    assert dataset.rejections == []
    assert len(dataset.invoices) == 1200
    truth = GroundTruth.read_jsonl(tmp_path / "ground_truth.jsonl")
    assert len(truth.groups) == 3
    invoice_ids = {i.invoice_id for i in dataset.invoices}
    entity_ids = ({t.id for t in dataset.taxpayers} | {i.id for i in dataset.investors})
    for g in truth.groups:
        assert set(g.rpt_invoice_ids) <= invoice_ids
        assert set(g.member_ids) <= entity_ids


def test_month_end_bias_within_two_points():
    dataset, _ = generate(config(n_invoices=12_000, month_end_bias=0.6, seed=9))
    share = sum(is_month_end(i.date) for i in dataset.invoices) / len(dataset.invoices)
    assert abs(share - 0.6) < 0.02


def test_planted_invoices_pass_fusion_predicate_per_oracle():
    """Re-verify the generator's claim with the test-side oracle."""
    dataset, truth = generate(config(planted_depth=3, seed=21))
    edges = [(e.investor_id, e.investee_id, e.share_ratio) for e in dataset.investments]
    invoices_by_id = {i.invoice_id: i for i in dataset.invoices}
    kinds = {t.id: "taxpayer" for t in dataset.taxpayers}
    for i in dataset.investors:
        kinds[i.id] = "both" if i.id in kinds else "investor"
    for g in truth.groups:
        for iid in g.rpt_invoice_ids:
            inv = invoices_by_id[iid]
            hops = oracles.bfs_distance(edges, inv.seller_id, inv.buyer_id)
            assert hops is not None and hops <= truth.recommended_max_txn_chain
            owners = oracles.qualifying_owners(kinds, edges, inv.buyer_id, inv.seller_id,
                                               truth.recommended_min_ratio)
            assert owners, f"no qualifying owner for planted invoice {iid}"
            assert g.owner_id in owners
        # every member sits within the control chain of some trading taxpayer
        member_edges = [(a, b, r) for a, b, r in edges
                        if a in g.member_ids and b in g.member_ids]
        dist = oracles.multi_source_distances(member_edges, set(g.taxpayer_ids))
        for member in g.member_ids:
            assert dist.get(member, 99) <= truth.recommended_max_ctrl_chain


def test_infeasible_configs_raise():
    with pytest.raises(ConfigError):
        config(n_planted_groups=5, n_investors=3)
    with pytest.raises(ConfigError):
        config(n_invoices=-1)
    with pytest.raises(ConfigError):
        config(month_end_bias=1.5)
    with pytest.raises(ConfigError):
        generate(config(n_invoices=10, n_planted_groups=3))  # cannot hold the plants
    with pytest.raises(ConfigError):
        generate(config(date_end=date(2014, 1, 10)))  # period too short to stage profits


def test_noise_does_not_touch_planted_taxpayers():
    """Planted profit trajectories must depend only on planted invoices."""
    dataset, truth = generate(config(seed=13))
    planted_taxpayers = {tid for g in truth.groups for tid in g.taxpayer_ids}
    planted_invoices = {iid for g in truth.groups for iid in g.rpt_invoice_ids}
    for inv in dataset.invoices:
        touches = {inv.seller_id, inv.buyer_id} & planted_taxpayers
        if touches:
            assert inv.invoice_id in planted_invoices
