"""Inference engine: sessions, pragmatic selection, episode runner."""

from .session import (
    POLICIES,
    CandidateSet,
    Hyperparams,
    Session,
    begin_session,
    next_question,
    receive_answer,
)
from .selection import (
    argmax_with_ties,
    blend_select_index,
    pragmatic_select,
    pragmatic_select_index,
)
from .episode import (
    AnswerOracle,
    EpisodeResult,
    episode_rngs,
    run_episode,
    scripted_oracle,
    simulated_oracle,
)

__all__ = [
    "POLICIES", "CandidateSet", "Hyperparams", "Session",
    "begin_session", "next_question", "receive_answer",
    "argmax_with_ties", "blend_select_index", "pragmatic_select",
    "pragmatic_select_index",
    "AnswerOracle", "EpisodeResult", "episode_rngs", "run_episode",
    "scripted_oracle", "simulated_oracle",
]
