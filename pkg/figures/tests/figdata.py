"""Builders for synthetic results trees shaped like the simulator's output."""

COLUMNS = (
    "slot", "M", "w_1", "w_2", "w_3", "w_4",
    "C_s_bits", "ber_bob", "ber_eve", "utility", "epsilon", "greedy",
)


def write_episode(path, slots=40, cs=1.0, ber_bob=1e-3, ber_eve=0.42,
                  utility=0.9, wobble=0.0, drop_columns=()):
    """One schema-correct episode CSV with constant (or gently wobbling)
    metric values.  `drop_columns` omits columns to simulate a
    malformed series."""
    names = [c for c in COLUMNS if c not in drop_columns]
    lines = [",".join(names)]
    for k in range(slots):
        c = cs + wobble * ((k % 7) - 3)
        values = {
            "slot": str(k), "M": "8",
            "w_1": "1.0", "w_2": "0.5", "w_3": "-0.5", "w_4": "0.0",
            "C_s_bits": repr(c), "ber_bob": repr(ber_bob),
            "ber_eve": repr(ber_eve), "utility": repr(utility),
            "epsilon": "0.5", "greedy": "1",
        }
        lines.append(",".join(values[n] for n in names))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
