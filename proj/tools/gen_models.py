#!/usr/bin/env python3
"""Generates the bundled case-study models under models/.

Probabilities and rewards are emitted as expressions over the declared
constants so that `nashcsg sweep` can rebind them without regenerating.
Structural parameters (months, rounds, energy, deadline) are fixed here.
"""

import argparse
import itertools
import json
from pathlib import Path

import sympy


def write(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def expr(e):
    return str(sympy.expand(e)).replace("**", "^")


# Public good: three investors choose to invest none, half or all of their
# current capital each month; the pot is multiplied by f and shared equally.
# States record the investment history, so capital and profit are
# polynomials in f and the initial capital.

FRACTIONS = {"none": 0, "half": sympy.Rational(1, 2), "all": 1}
CODES = {"none": "n", "half": "h", "all": "a"}
F_STEP = sympy.Rational(1, 5)


def public_good(months, varying_f):
    f, e = sympy.symbols("f e_init")
    players = ["p1", "p2", "p3"]
    actions = list(FRACTIONS)
    doc = {
        "constants": {"f": 2.0, "e_init": 10.0},
        "players": [{"name": p, "actions": actions} for p in players],
        "states": [],
        "initial": [],
        "availability": {},
        "transitions": [],
        "rewards": {},
    }
    if varying_f:
        doc["constants"]["p_stay"] = 0.8
    state_rewards = {f"cap{i + 1}": {} for i in range(3)}
    action_rewards = {f"pro{i + 1}": [] for i in range(3)}

    # A state is (month, history of joint choices, f offset in steps of 0.2).
    def name(month, history, offset):
        hist = "".join("".join(CODES[a] for a in joint) + "/" for joint in history)
        sid = f"m{month}:{hist}"
        if varying_f:
            sid += f"f{offset:+d}"
        return sid

    frontier = [((), 0, [e, e, e])]
    doc["initial"].append(name(0, (), 0))
    for month in range(months + 1):
        next_frontier = []
        for history, offset, capital in frontier:
            sid = name(month, history, offset)
            labels = ["final"] if month == months else []
            doc["states"].append({"id": sid, "labels": labels})
            for i in range(3):
                state_rewards[f"cap{i + 1}"][sid] = expr(capital[i])
            if month == months:
                doc["availability"][sid] = {p: ["none"] for p in players}
                doc["transitions"].append({"state": sid, "joint": ["none"] * 3, "dist": {sid: 1}})
                continue
            doc["availability"][sid] = {p: actions for p in players}
            fm = f + F_STEP * offset
            for joint in itertools.product(actions, repeat=3):
                invest = [FRACTIONS[a] * capital[i] for i, a in enumerate(joint)]
                share = fm / 3 * sum(invest)
                profit = [share - invest[i] for i in range(3)]
                new_capital = [sympy.expand(capital[i] + profit[i]) for i in range(3)]
                for i in range(3):
                    value = expr(profit[i])
                    if value != "0":
                        action_rewards[f"pro{i + 1}"].append({"state": sid, "joint": list(joint), "v": value})
                hist = history + (joint,)
                if varying_f and month + 1 < months:
                    moves = [(offset, "p_stay"), (offset + 1, "(1-p_stay)/2"), (offset - 1, "(1-p_stay)/2")]
                else:
                    moves = [(offset, 1)]
                dist = {}
                for off, p in moves:
                    target = name(month + 1, hist, off)
                    dist[target] = p
                    next_frontier.append((hist, off, new_capital))
                doc["transitions"].append({"state": sid, "joint": list(joint), "dist": dist})
        # Histories are unique, so this only guards against repeated entries.
        seen = set()
        frontier = []
        for item in next_frontier:
            key = name(month + 1, item[0], item[1])
            if key not in seen:
                seen.add(key)
                frontier.append(item)
    for r, values in state_rewards.items():
        doc["rewards"][r] = {"state": values}
    for r, values in action_rewards.items():
        doc["rewards"][r] = {"action": values}
    return doc


# Secret sharing among three agents. Every round each agent tosses a coin
# with bias alpha. A follower sends its share when its coin shows heads; a
# cheater ignores its coin and never sends. Rounds without cheaters succeed
# when all coins show heads. A round with cheaters is decided by the
# followers' coins: all heads lets a lone cheater reconstruct the secret
# (u1 for it, u0 for everyone else; two or more cheaters learn nothing),
# all tails exposes the cheat and aborts (u0 for all); any other outcome
# starts a fresh round. A byzantine agent follows the protocol but with
# probability p_fail corrupts its share, so a reconstruction in that round
# yields a wrong secret (u0 for all).

SS_ROLES = {
    "raa": ["rational", "altruistic", "altruistic"],
    "rba": ["rational", "byzantine", "altruistic"],
    "rra": ["rational", "rational", "altruistic"],
    "rrr": ["rational", "rational", "rational"],
}


def power(base, k):
    if k == 0:
        return "1"
    return "*".join([base] * k)


def secret_sharing(variant, rmax):
    roles = SS_ROLES[variant]
    names = [f"{r[0]}{i + 1}" for i, r in enumerate(roles)]
    byz = "byzantine" in roles
    doc = {
        "constants": {"alpha": 0.8, "u3": 1.0, "u2": 1.5, "u1": 2.0, "u0": 0.0},
        "players": [],
        "states": [],
        "initial": ["round1" if rmax else "round"],
        "availability": {},
        "transitions": [],
        "rewards": {},
    }
    if byz:
        doc["constants"]["p_fail"] = 0.1
    for n, role in zip(names, roles):
        doc["players"].append({"name": n, "actions": ["follow", "cheat"] if role == "rational" else ["follow"]})

    outcomes = ["all_learn", "abort"] + [f"{n}_only" for n, r in zip(names, roles) if r == "rational"]
    rounds = [f"round{r}" for r in range(1, rmax + 1)] if rmax else ["round"]
    for sid in rounds:
        doc["states"].append({"id": sid})
    for o in outcomes:
        doc["states"].append({"id": o})
    if rmax:
        doc["states"].append({"id": "timeout"})
    doc["states"].append({"id": "done", "labels": ["done"]})

    ok = "(1-p_fail)" if byz else None

    def scaled(p, byz_in):
        return f"{p}*{ok}" if byz_in else p

    for k, sid in enumerate(rounds):
        nxt = rounds[k + 1] if k + 1 < len(rounds) else ("timeout" if rmax else sid)
        doc["availability"][sid] = {
            n: (["follow", "cheat"] if r == "rational" else ["follow"]) for n, r in zip(names, roles)
        }
        choices = [["follow", "cheat"] if r == "rational" else ["follow"] for r in roles]
        for joint in itertools.product(*choices):
            cheaters = [n for n, a in zip(names, joint) if a == "cheat"]
            followers = [i for i, a in enumerate(joint) if a == "follow"]
            byz_follows = any(roles[i] == "byzantine" for i in followers)
            dist = {}

            def add(target, p):
                dist[target] = f"{dist[target]} + {p}" if target in dist else p

            if not cheaters:
                heads = power("alpha", 3)
                add("all_learn", scaled(heads, byz))
                if byz:
                    add("abort", f"{heads}*p_fail")
                add(nxt, f"1 - {heads}")
            elif not followers:
                add("abort", "1")
            else:
                nf = len(followers)
                heads = power("alpha", nf)
                tails = power("(1-alpha)", nf)
                if len(cheaters) == 1:
                    add(f"{cheaters[0]}_only", scaled(heads, byz_follows))
                    if byz_follows:
                        add("abort", f"{heads}*p_fail")
                else:
                    add("abort", heads)
                add("abort", tails)
                if nf > 1:
                    add(nxt, f"1 - {heads} - {tails}")
            doc["transitions"].append({"state": sid, "joint": list(joint), "dist": dist})

    ends = outcomes + (["timeout"] if rmax else []) + ["done"]
    for sid in ends:
        doc["availability"][sid] = {n: ["follow"] for n in names}
        doc["transitions"].append({"state": sid, "joint": ["follow"] * 3, "dist": {"done": 1}})

    for n in names:
        values = {"all_learn": "u3", "abort": "u0"}
        for o in outcomes:
            if o.endswith("_only"):
                values[o] = "u1" if o == f"{n}_only" else "u0"
        if rmax:
            values["timeout"] = "u0"
        doc["rewards"][f"u_{n}"] = {"state": values}
    return doc


# Slotted Aloha with three users, each holding one packet. A user with no
# pending backoff may send or wait; k simultaneous senders each succeed with
# probability q/k. After the c-th failure (c capped at 2) a user waits a
# uniform number of slots in [0, 2^c - 1] before it may send again.

def aloha():
    users = ["usr1", "usr2", "usr3"]
    local = [("done", 0, 0)] + [("wait", b, c) for c in range(3) for b in range(2 ** c)]

    def lname(s):
        return "d" if s[0] == "done" else f"b{s[1]}c{s[2]}"

    doc = {
        "constants": {"q": 0.9},
        "players": [{"name": u, "actions": ["send", "wait"]} for u in users],
        "states": [],
        "initial": ["b0c0.b0c0.b0c0"],
        "availability": {},
        "transitions": [],
        "rewards": {"time": {"state": {}}},
    }
    all_states = list(itertools.product(local, repeat=3))
    for st in all_states:
        sid = ".".join(lname(s) for s in st)
        labels = [f"sent{i + 1}" for i, s in enumerate(st) if s[0] == "done"]
        doc["states"].append({"id": sid, "labels": labels})
        if any(s[0] != "done" for s in st):
            doc["rewards"]["time"]["state"][sid] = 1
        avail = {}
        opts = []
        for u, s in zip(users, st):
            if s[0] == "done":
                avail[u] = []
                opts.append(["~"])
            elif s[1] == 0:
                avail[u] = ["send", "wait"]
                opts.append(["send", "wait"])
            else:
                avail[u] = ["wait"]
                opts.append(["wait"])
        if all(s[0] == "done" for s in st):
            # Everyone finished: a single user keeps the game moving.
            avail["usr1"] = ["wait"]
            opts[0] = ["wait"]
        doc["availability"][sid] = avail
        for joint in itertools.product(*opts):
            senders = [i for i, a in enumerate(joint) if a == "send"]
            k = len(senders)
            per_user = []
            for i, s in enumerate(st):
                if s[0] == "done":
                    per_user.append([(s, "1")])
                elif i in senders:
                    succ = "q" if k == 1 else f"q/{k}"
                    c2 = min(s[2] + 1, 2)
                    width = 2 ** c2
                    fail = [(("wait", b, c2), f"(1-{succ})/{width}") for b in range(width)]
                    per_user.append([(("done", 0, 0), succ)] + fail)
                elif s[1] > 0:
                    per_user.append([(("wait", s[1] - 1, s[2]), "1")])
                else:
                    per_user.append([(s, "1")])
            dist = {}
            for combo in itertools.product(*per_user):
                target = ".".join(lname(s) for s, _ in combo)
                factors = [p for _, p in combo if p != "1"]
                p = "*".join(f"({x})" for x in factors) if factors else "1"
                dist[target] = f"{dist[target]} + {p}" if target in dist else p
            doc["transitions"].append({"state": sid, "joint": list(joint), "dist": dist})
    return doc


# Medium access: three users with limited energy share a channel. Each step
# a user with energy left may transmit (spending one unit) or wait; with k
# simultaneous transmissions each succeeds with probability q_k. The reward
# msg_i is the expected number of successful transmissions of user i.

def medium_access(energy):
    users = ["u1", "u2", "u3"]
    doc = {
        "constants": {"q1": 0.9, "q2": 0.75, "q3": 0.6},
        "players": [{"name": u, "actions": ["transmit", "wait"]} for u in users],
        "states": [],
        "initial": [f"e{energy}.{energy}.{energy}"],
        "availability": {},
        "transitions": [],
        "rewards": {f"msg{i + 1}": {"action": []} for i in range(3)},
    }
    for st in itertools.product(range(energy, -1, -1), repeat=3):
        sid = "e" + ".".join(str(x) for x in st)
        doc["states"].append({"id": sid, "labels": ["empty"] if sum(st) == 0 else []})
        opts = [["transmit", "wait"] if x > 0 else ["wait"] for x in st]
        doc["availability"][sid] = {u: o for u, o in zip(users, opts)}
        for joint in itertools.product(*opts):
            k = sum(a == "transmit" for a in joint)
            nxt = tuple(x - (a == "transmit") for x, a in zip(st, joint))
            doc["transitions"].append(
                {"state": sid, "joint": list(joint), "dist": {"e" + ".".join(str(x) for x in nxt): 1}}
            )
            for i, a in enumerate(joint):
                if a == "transmit":
                    doc["rewards"][f"msg{i + 1}"]["action"].append({"state": sid, "joint": list(joint), "v": f"q{k}"})
    return doc


def nfg_text(players, actions, utility, comment):
    lines = [f"# {comment}", f"players {players}"]
    for i in range(players):
        lines.append(f"actions {i + 1} " + " ".join(actions[i]))
    for joint in itertools.product(*[range(len(a)) for a in actions]):
        vals = utility(joint)
        lines.append("u " + " ".join(actions[i][a] for i, a in enumerate(joint)) + " " + " ".join(vals))
    return "\n".join(lines) + "\n"


def public_good_nfg(f):
    amounts = [0, 5, 10]
    acts = [[f"in0_{i}", f"in5_{i}", f"in10_{i}"] for i in range(1, 4)]

    def util(joint):
        k = [amounts[a] for a in joint]
        out = []
        for i in range(3):
            v = sympy.Rational(f) / 3 * sum(k) - k[i]
            out.append(str(v))
        return out

    return nfg_text(3, acts, util, f"three-player public good, f = {f}")


PD = {
    "ccc": (7, 7, 7), "ccd": (3, 3, 9), "cdc": (3, 9, 3), "cdd": (0, 5, 5),
    "dcc": (9, 3, 3), "dcd": (5, 0, 5), "ddc": (5, 5, 0), "ddd": (1, 1, 1),
}


def pd_nfg():
    acts = [[f"c{i}", f"d{i}"] for i in range(1, 4)]

    def util(joint):
        key = "".join("cd"[a] for a in joint)
        return [str(v) for v in PD[key]]

    return nfg_text(3, acts, util, "three-player prisoner's dilemma")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "models"))
    args = parser.parse_args()
    out = Path(args.out)
    write(out / "public_good_fixed_f.json", public_good(months=2, varying_f=False))
    write(out / "public_good.json", public_good(months=2, varying_f=True))
    for variant in SS_ROLES:
        write(out / f"secret_sharing_{variant}.json", secret_sharing(variant, 0))
        write(out / f"secret_sharing_{variant}_rmax3.json", secret_sharing(variant, 3))
    write(out / "aloha3.json", aloha())
    write(out / "medium_access3.json", medium_access(energy=3))
    nfg = out / "nfg"
    nfg.mkdir(parents=True, exist_ok=True)
    (nfg / "table1_pd.nfg").write_text(pd_nfg())
    (nfg / "public_good_f2.nfg").write_text(public_good_nfg(2))
    (nfg / "public_good_f3.nfg").write_text(public_good_nfg(3))


if __name__ == "__main__":
    main()
