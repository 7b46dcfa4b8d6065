"""Rewrite the JSON fixtures under data/ from funcsec.fixtures."""

from pathlib import Path

from funcsec import fixtures as F
from funcsec.core import dumps
from funcsec.eavesdrop import selected_bit_base, selected_bit_instance
from funcsec.noninteractive import Channel
from funcsec.protocol import tree_to_dict

DATA = Path(__file__).resolve().parent.parent / "data"


def documents() -> dict:
    base = selected_bit_base()
    _, tree1 = selected_bit_instance(1)
    _, tree2 = selected_bit_instance(2)
    return {
        "hidden_3x3.json": F.hidden_3x3().to_dict(),
        "classic_3x3.json": F.classic_3x3().to_dict(),
        "classic_and.json": F.classic_and().to_dict(),
        "and_hidden_bit.json": F.and_hidden_bit().to_dict(),
        "uniform_3x3.json": F.uniform(F.hidden_3x3()).to_dict(),
        "uniform_2x2.json": F.uniform(F.classic_and()).to_dict(),
        "one_way.json": F.one_way().to_dict(),
        "one_way_uniform.json": F.one_way_uniform().to_dict(),
        "one_way_correlated.json": F.one_way_correlated().to_dict(),
        "channel_u_eq_yprime.json": Channel.deterministic([0, 0, 1, 1]).to_dict(),
        "selected_bit.json": base.to_dict(),
        "selected_bit_dist.json": base.dist.to_dict(),
        "selected_bit_g.json": {"g": [list(r) for r in base.g]},
        "selected_bit_protocol_n1.json": tree_to_dict(tree1),
        "selected_bit_protocol_n2.json": tree_to_dict(tree2),
    }


if __name__ == "__main__":
    for name, doc in documents().items():
        (DATA / name).write_text(dumps(doc))
        print("wrote", name)
