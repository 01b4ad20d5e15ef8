import io
import random

import pytest

from rptte.ingest import (
    Manifest,
    load_manifest,
    parse_audits,
    parse_investments,
    parse_investors,
    parse_invoices,
    parse_taxpayers,
)
from rptte.records import FormatError

from .conftest import day

TAXPAYER_HEADER = "id,industry,ownership_type,region,merchandise\n"
MANIFEST = Manifest(date_start=day(0), date_end=day(364))


def taxpayer_csv(*rows):
    return TAXPAYER_HEADER + "".join(r + "\n" for r in rows)


def test_three_valid_rows_three_profiles():
    result = parse_taxpayers(taxpayer_csv(
        "T1,steel,private,north,coal",
        "T2,retail,state,south,grain",
        "T3,services,private,east,textiles",
    ))
    assert len(result.records) == 3
    assert result.rejections == []
    assert result.records[0].id == "T1"
    assert result.records[2].merchandise == "textiles"


def test_empty_id_rejected_with_reason():
    result = parse_taxpayers(taxpayer_csv(",steel,private,north,coal"))
    assert result.records == []
    assert len(result.rejections) == 1
    assert result.rejections[0].file == "taxpayers"
    assert result.rejections[0].line == 2
    assert "empty id" in result.rejections[0].reason


def test_duplicate_id_first_occurrence_wins():
    rows = [
        "T1,steel,private,north,coal",
        "T2,retail,state,south,grain",
        "T9,a,b,c,d",
        "T8,a,b,c,d",
        "T2,services,private,east,textiles",
    ]
    result = parse_taxpayers(taxpayer_csv(*rows))
    assert [r.id for r in result.records] == ["T1", "T2", "T9", "T8"]
    assert result.records[1].industry == "retail"
    assert result.rejections[0].line == 6

    # Swapping the duplicate rows flips which version survives: order decides.
    swapped = rows[:]
    swapped[1], swapped[4] = swapped[4], swapped[1]
    result2 = parse_taxpayers(taxpayer_csv(*swapped))
    kept = next(r for r in result2.records if r.id == "T2")
    assert kept.industry == "services"


def test_malformed_header_is_fatal():
    with pytest.raises(FormatError):
        parse_taxpayers("id,industry\nT1,steel\n")
    with pytest.raises(FormatError):
        parse_taxpayers("")


def test_bytes_and_stream_sources():
    text = taxpayer_csv("T1,steel,private,north,coal")
    assert len(parse_taxpayers(text.encode()).records) == 1
    assert len(parse_taxpayers(io.BytesIO(text.encode())).records) == 1


def test_invoice_amount_zero_rejected():
    csv = ("invoice_id,date,seller_id,buyer_id,amount,vat_amount\n"
           "I1,2014-01-05,T1,T2,0.00,0.00\n")
    result = parse_invoices(csv, MANIFEST)
    assert result.records == []
    assert "amount" in result.rejections[0].reason


def test_invoice_self_trade_rejected():
    csv = ("invoice_id,date,seller_id,buyer_id,amount,vat_amount\n"
           "I1,2014-01-05,T1,T1,10.00,1.00\n")
    result = parse_invoices(csv, MANIFEST)
    assert result.records == []
    assert "seller equals buyer" in result.rejections[0].reason


def test_invoice_outside_manifest_range_rejected():
    csv = ("invoice_id,date,seller_id,buyer_id,amount,vat_amount\n"
           "I1,2016-01-05,T1,T2,10.00,1.00\n"
           "I2,2014-06-05,T1,T2,10.00,1.00\n")
    result = parse_invoices(csv, MANIFEST)
    assert [r.invoice_id for r in result.records] == ["I2"]
    assert "outside declared range" in result.rejections[0].reason


def test_share_ratio_boundaries():
    csv = ("investor_id,investee_id,amount,share_ratio\n"
           "P1,T1,1000.00,1.0\n"     # boundary of (0, 1]: accepted
           "P1,T2,1000.00,0.0\n"     # rejected
           "P1,T3,1000.00,1.2\n"     # rejected
           "P1,P1,1000.00,0.5\n")    # self-loop rejected
    result = parse_investments(csv)
    assert len(result.records) == 1
    assert result.records[0].share_ratio == 1.0
    assert len(result.rejections) == 3


def test_inbound_ratio_sum_above_one_warns_but_keeps_rows():
    csv = ("investor_id,investee_id,amount,share_ratio\n"
           "P1,T1,1.00,0.8\n"
           "P2,T1,1.00,0.7\n")
    result = parse_investments(csv)
    assert len(result.records) == 2
    assert any("sum to" in w for w in result.warnings)


def test_investor_entity_kind_validated():
    result = parse_investors("id,entity_kind\nP1,person\nP2,robot\n")
    assert [r.id for r in result.records] == ["P1"]
    assert "entity_kind" in result.rejections[0].reason


def test_audit_parse_and_violation_flag():
    csv = ("taxpayer_id,audit_date,violation_type,description,action_taken,tax_payable\n"
           "T1,2014-03-01,false_invoice,desc,penalty,100.00\n"
           "T2,2014-03-01,,clean audit,none,0.00\n")
    result = parse_audits(csv)
    assert len(result.records) == 2
    assert result.records[0].is_violation
    assert not result.records[1].is_violation


def test_manifest_rejects_bad_payload(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text('{"date_start": "2014-01-01"}')
    with pytest.raises(FormatError):
        load_manifest(path)


def test_parsing_is_total_records_plus_rejections():
    """Every row lands in exactly one bucket, whatever the mix of dirt."""
    rng = random.Random(20140101)
    rows = []
    for i in range(300):
        roll = rng.random()
        if roll < 0.6:
            rows.append(f"T{i},steel,private,north,coal")
        elif roll < 0.7:
            rows.append(",steel,private,north,coal")
        elif roll < 0.8:
            rows.append(f"T{rng.randint(0, 20)},retail,state,south,grain")
        elif roll < 0.9:
            rows.append("only,three,fields")
        else:
            rows.append(f"T{i},a,b,c,d")
    result = parse_taxpayers(taxpayer_csv(*rows))
    assert len(result.records) + len(result.rejections) == len(rows)
