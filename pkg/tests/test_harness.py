"""CLI and HTTP service tests, including the scripted-client equivalence."""

import json
import threading

import numpy as np
import pytest
from fastapi.testclient import TestClient

from iogsim.agents import AgentNoiseParams
from iogsim.cli import main as cli_main
from iogsim.dialogue import Hyperparams, run_episode, simulated_oracle
from iogsim.grasp import RansacParams, grasp_target
from iogsim.service import SessionRecordStore, create_app
from iogsim.world import render_point_cloud, generate_task, split_config


@pytest.fixture()
def client():
    return TestClient(create_app(SessionRecordStore()))


def first_scene_id(client) -> str:
    return client.get("/scenes").json()["scenes"][0]["id"]


class TestCli:
    def test_gen_data_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "records.json"
        code = cli_main(["gen-data", "--count", "12", "--seed", "3",
                         "--out", str(out)])
        assert code == 0
        data = json.loads(out.read_text())
        assert len(data) == 12
        assert {"scene", "utterance", "qa_pairs", "region_labels", "target_box"} <= set(data[0])

    def test_bench_writes_csv_and_figures(self, tmp_path):
        config = {
            "seed": 4, "num_scenes": 6, "splits": ["seen"],
            "policies": ["silent", "prograsp"], "lambda_grid": [0.9], "t_grid": [2],
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(config))
        out = tmp_path / "report.csv"
        code = cli_main(["bench", "--config", str(cfg_path), "--out", str(out),
                         "--with-episodes"])
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert header.startswith("split,policy,lambda,T,acc_")
        assert (tmp_path / "report_accuracy.png").stat().st_size > 0
        assert (tmp_path / "report_efficiency.png").stat().st_size > 0
        episodes = (tmp_path / "report_episodes.jsonl").read_text().splitlines()
        assert len(episodes) == 12  # 2 policies x 6 scenes

    def test_sweep_grid_product(self, tmp_path):
        out = tmp_path / "sweep.json"
        code = cli_main(["sweep", "--lambda", "0,0.5,0.9,1", "--rounds", "1,2,3",
                         "--scenes", "4", "--seed", "2", "--out", str(out)])
        assert code == 0
        cells = json.loads(out.read_text())["cells"]
        assert len(cells) == 12
        assert (tmp_path / "sweep.png").stat().st_size > 0

    def test_replay_deterministic(self, tmp_path, capsys):
        spec = {"split": "seen", "generator_seed": 5, "policy": "prograsp",
                "seed": 11, "T": 3, "lambda": 0.9}
        path = tmp_path / "episode.json"
        path.write_text(json.dumps(spec))
        assert cli_main(["replay", "--episode", str(path)]) == 0
        first = capsys.readouterr().out
        assert cli_main(["replay", "--episode", str(path)]) == 0
        second = capsys.readouterr().out
        assert first == second
        assert "round 1: Q:" in first

    def test_error_exit_code(self, tmp_path, capsys):
        code = cli_main(["replay", "--episode", str(tmp_path / "missing.json")])
        assert code == 1
        assert "iogsim: error:" in capsys.readouterr().err


class TestServiceBasics:
    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}

    def test_scene_endpoints(self, client):
        scene_id = first_scene_id(client)
        scene = client.get(f"/scenes/{scene_id}").json()
        assert scene["id"] == scene_id
        assert {"id", "width", "height", "objects", "target_id",
                "table_z", "clutter_mode"} <= set(scene)
        render = client.get(f"/scenes/{scene_id}/render").json()
        assert render["svg"].startswith("<svg")
        assert render["svg"].count("<g data-object-id=") == len(scene["objects"])
        assert render["scene"] == scene
        assert render["utterances"]

    def test_scene_render_stable(self, client):
        scene_id = first_scene_id(client)
        a = client.get(f"/scenes/{scene_id}/render").json()["svg"]
        b = client.get(f"/scenes/{scene_id}/render").json()["svg"]
        assert a == b

    def test_unknown_scene_404(self, client):
        response = client.get("/scenes/nope")
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"


class TestSessionLifecycle:
    def create(self, client, **overrides):
        body = {"split": "seen", "generator_seed": 9, "policy": "prograsp",
                "lambda": 0.9, "T": 3, "seed": 21}
        body.update(overrides)
        response = client.post("/sessions", json=body)
        assert response.status_code == 201, response.text
        return response.json()

    def test_question_policy_flow(self, client):
        created = self.create(client)
        assert created["question"] is not None
        assert created["round"] == 0 and created["estimate"] is None

        session_id = created["session_id"]
        answered = client.post(f"/sessions/{session_id}/answer",
                               json={"polarity": "no"}).json()
        assert answered["round"] == 1
        assert answered["estimate"] is not None
        assert answered["question"] is not None and not answered["done"]

        view = client.get(f"/sessions/{session_id}").json()
        assert view["round"] == 1
        assert len(view["transcript"]) == 1
        assert view["candidates"]
        assert abs(sum(c["prob"] for c in view["candidates"]) - 1.0) < 1e-9

    def test_silent_policy_immediate_estimate(self, client):
        created = self.create(client, policy="silent")
        assert created["question"] is None
        assert created["estimate"] is not None and created["done"]
        session_id = created["session_id"]
        final = client.post(f"/sessions/{session_id}/finalize")
        assert final.status_code == 200
        grasp = final.json()["grasp"]
        assert {"x", "y", "z", "points_used"} <= set(grasp)

    def test_answer_without_pending_question_409(self, client):
        created = self.create(client, policy="silent")
        response = client.post(f"/sessions/{created['session_id']}/answer",
                               json={"polarity": "yes"})
        assert response.status_code == 409
        assert response.json()["code"] == "invalid_state"

    def test_done_after_t_rounds(self, client):
        created = self.create(client, T=2)
        session_id = created["session_id"]
        first = client.post(f"/sessions/{session_id}/answer", json={"polarity": "no"}).json()
        assert not first["done"]
        second = client.post(f"/sessions/{session_id}/answer", json={"polarity": "no"}).json()
        assert second["done"] and second["question"] is None
        third = client.post(f"/sessions/{session_id}/answer", json={"polarity": "no"})
        assert third.status_code == 409

    def test_finalize_before_estimate_409(self, client):
        created = self.create(client)
        response = client.post(f"/sessions/{created['session_id']}/finalize")
        assert response.status_code == 409

    def test_finalize_twice_closed(self, client):
        created = self.create(client, policy="silent")
        session_id = created["session_id"]
        assert client.post(f"/sessions/{session_id}/finalize").status_code == 200
        again = client.post(f"/sessions/{session_id}/finalize")
        assert again.status_code == 404
        assert "closed" in again.json()["message"]
        # the read-only view survives for UI replay
        view = client.get(f"/sessions/{session_id}").json()
        assert view["status"] == "finalized" and view["grasp"] is not None

    def test_text_answer_forms(self, client):
        created = self.create(client)
        session_id = created["session_id"]
        response = client.post(f"/sessions/{session_id}/answer", json={"text": "No."})
        assert response.status_code == 200
        bad = client.post(f"/sessions/{session_id}/answer",
                          json={"text": "maybe tomorrow"})
        assert bad.status_code == 400
        assert bad.json()["code"] == "bad_request"

    def test_correction_must_name_scene_object(self, client):
        created = self.create(client)
        response = client.post(
            f"/sessions/{created['session_id']}/answer",
            json={"polarity": "no", "correction": {"category": "unicorn", "attribute": None}},
        )
        assert response.status_code == 400

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope").status_code == 404
        assert client.post("/sessions/nope/answer", json={"polarity": "yes"}).status_code == 404

    def test_bad_create_requests(self, client):
        both = client.post("/sessions", json={"scene_id": "x", "split": "seen",
                                              "utterance": "I am thirsty."})
        assert both.status_code == 400
        missing_scene = client.post("/sessions", json={"scene_id": "nope",
                                                       "utterance": "I am thirsty."})
        assert missing_scene.status_code == 404
        bad_policy = client.post("/sessions", json={"split": "seen", "policy": "psychic"})
        assert bad_policy.status_code == 400
        bad_t = client.post("/sessions", json={"split": "seen", "T": 0})
        assert bad_t.status_code == 400

    def test_ungroundable_utterance_engine_error(self, client):
        response = client.post("/sessions", json={
            "split": "seen", "generator_seed": 9,
            "utterance": "do a barrel roll",
        })
        assert response.status_code == 500
        assert response.json()["code"] == "engine_error"


class TestConcurrentSessions:
    def test_interleaved_sessions_isolated(self, client):
        a = client.post("/sessions", json={"split": "seen", "generator_seed": 1,
                                           "seed": 5, "T": 3}).json()
        b = client.post("/sessions", json={"split": "seen", "generator_seed": 2,
                                           "seed": 6, "T": 3}).json()
        client.post(f"/sessions/{a['session_id']}/answer", json={"polarity": "no"})
        view_b = client.get(f"/sessions/{b['session_id']}").json()
        assert view_b["round"] == 0 and view_b["transcript"] == []
        client.post(f"/sessions/{b['session_id']}/answer", json={"polarity": "yes"})
        view_a = client.get(f"/sessions/{a['session_id']}").json()
        assert view_a["round"] == 1 and len(view_a["transcript"]) == 1

    def test_parallel_session_creation(self, client):
        ids = []
        errors = []

        def worker(k):
            try:
                response = client.post("/sessions", json={
                    "split": "seen", "generator_seed": k, "seed": k, "T": 2,
                })
                ids.append(response.json()["session_id"])
            except Exception as exc:  # surface in the main thread
                errors.append(exc)

        threads = [threading.Thread(target=worker, args=(k,)) for k in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        assert len(set(ids)) == 8


class TestPersistence:
    def test_restart_replays_sessions(self, tmp_path):
        log = tmp_path / "sessions.jsonl"
        store1 = SessionRecordStore(path=str(log))
        client1 = TestClient(create_app(store1))
        created = client1.post("/sessions", json={
            "split": "seen", "generator_seed": 7, "seed": 13, "T": 3,
        }).json()
        session_id = created["session_id"]
        client1.post(f"/sessions/{session_id}/answer", json={"polarity": "no"})
        view1 = client1.get(f"/sessions/{session_id}").json()

        store2 = SessionRecordStore(path=str(log))
        client2 = TestClient(create_app(store2))
        view2 = client2.get(f"/sessions/{session_id}").json()
        assert view2 == view1


class TestScriptedClientEquivalence:
    def test_service_matches_in_process_episode(self):
        """Same scene, seed, and answers through the HTTP service must
        reproduce run_episode byte for byte, grasp included."""
        params = AgentNoiseParams()
        generator_seed, episode_seed = 31, 77
        task = generate_task(split_config("seen"), generator_seed)
        hyper = Hyperparams(max_rounds=3, rationality=0.9)

        reference = run_episode(task.scene, task.utterance, "prograsp", hyper,
                                simulated_oracle(params), seed=episode_seed,
                                params=params)
        assert reference.error is None
        cloud = render_point_cloud(task.scene, 0.001)
        reference_grasp = grasp_target(cloud, reference.estimate, RansacParams())

        client = TestClient(create_app(SessionRecordStore()))
        created = client.post("/sessions", json={
            "split": "seen", "generator_seed": generator_seed,
            "utterance": task.utterance, "policy": "prograsp",
            "lambda": 0.9, "T": 3, "seed": episode_seed,
        }).json()
        assert created["scene_id"] == task.scene.id
        assert created["question"] == reference.transcript[0][0]

        session_id = created["session_id"]
        estimates = []
        for round_index, (question, answer_text) in enumerate(reference.transcript):
            response = client.post(f"/sessions/{session_id}/answer",
                                   json={"text": answer_text}).json()
            estimates.append(response["estimate"])
            if round_index + 1 < len(reference.transcript):
                assert response["question"] == reference.transcript[round_index + 1][0]

        expected = [box.as_list() for box in reference.per_round_estimates]
        assert estimates == expected

        final = client.post(f"/sessions/{session_id}/finalize").json()
        assert final["estimate"] == reference.estimate.as_list()
        assert final["grasp"] == reference_grasp.to_json()
