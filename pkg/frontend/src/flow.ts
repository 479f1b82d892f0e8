// Episode flow state machine. Framework-free: holds the live view,
// guards the request lifecycle client-side, and never computes any
// inference locally -- every estimate and score shown is exactly what
// the server last returned.

import {
  AnswerBody,
  Box,
  CreateSessionRequest,
  Descriptor,
  GraspTarget,
  ScoredCandidate,
  ServiceClient,
  ServiceError,
} from './api.js'

export type FlowPhase =
  | 'idle'
  | 'loading'
  | 'asking'      // a question is displayed, answer controls enabled
  | 'submitting'  // request in flight, controls disabled
  | 'answered'    // round budget exhausted, finalize enabled
  | 'finalized'
  | 'error'

export interface Banner {
  code: string
  message: string
}

export interface EpisodeView {
  phase: FlowPhase
  sessionId: string | null
  sceneId: string | null
  svg: string | null
  utterance: string | null
  question: string | null
  estimate: Box | null
  candidates: ScoredCandidate[]
  transcript: [string, string][]
  round: number
  maxRounds: number
  policy: string
  grasp: GraspTarget | null
  banner: Banner | null
  descriptors: Descriptor[]
}

export function emptyView(): EpisodeView {
  return {
    phase: 'idle',
    sessionId: null,
    sceneId: null,
    svg: null,
    utterance: null,
    question: null,
    estimate: null,
    candidates: [],
    transcript: [],
    round: 0,
    maxRounds: 0,
    policy: 'prograsp',
    grasp: null,
    banner: null,
    descriptors: [],
  }
}

export class EpisodeFlow {
  view: EpisodeView = emptyView()

  constructor(
    private client: ServiceClient,
    private onChange: (view: EpisodeView) => void = () => {},
  ) {}

  private emit(): void {
    this.onChange(this.view)
  }

  private fail(err: unknown): void {
    const banner: Banner =
      err instanceof ServiceError
        ? { code: err.code, message: err.message }
        : { code: 'engine_error', message: String(err) }
    // keep the transcript; only the phase and banner change
    this.view = { ...this.view, phase: 'error', banner }
    this.emit()
  }

  private async refreshView(): Promise<void> {
    if (!this.view.sessionId) return
    const session = await this.client.getSession(this.view.sessionId)
    this.view = {
      ...this.view,
      question: session.question,
      estimate: session.estimate,
      candidates: session.candidates,
      transcript: session.transcript,
      round: session.round,
      maxRounds: session.T,
      grasp: session.grasp,
      phase: session.status === 'finalized'
        ? 'finalized'
        : session.done ? 'answered'
        : session.question ? 'asking'
        : 'answered',
    }
    this.emit()
  }

  async start(request: CreateSessionRequest): Promise<void> {
    if (this.view.phase === 'loading' || this.view.phase === 'submitting') return
    this.view = { ...emptyView(), phase: 'loading', policy: request.policy ?? 'prograsp' }
    this.emit()
    try {
      const created = await this.client.createSession(request)
      const render = await this.client.getSceneRender(created.scene_id)
      this.view = {
        ...this.view,
        sessionId: created.session_id,
        sceneId: created.scene_id,
        svg: render.svg,
        descriptors: render.descriptors,
        utterance: request.utterance ?? null,
        question: created.question,
        estimate: created.estimate,
        round: created.round,
        maxRounds: created.T,
        phase: created.done ? 'answered' : 'asking',
        banner: null,
      }
      this.emit()
      await this.refreshView()
    } catch (err) {
      this.fail(err)
    }
  }

  /** Submit the human's answer; double submits are rejected client-side. */
  async submitAnswer(body: AnswerBody): Promise<boolean> {
    const sessionId = this.view.sessionId
    if (this.view.phase !== 'asking' || !sessionId) return false
    this.view = { ...this.view, phase: 'submitting' }
    this.emit()
    try {
      await this.client.postAnswer(sessionId, body)
      await this.refreshView()
      return true
    } catch (err) {
      this.fail(err)
      return false
    }
  }

  async finalize(): Promise<boolean> {
    const sessionId = this.view.sessionId
    if (this.view.phase !== 'answered' || !sessionId) return false
    this.view = { ...this.view, phase: 'submitting' }
    this.emit()
    try {
      await this.client.finalize(sessionId)
      await this.refreshView()
      return true
    } catch (err) {
      this.fail(err)
      return false
    }
  }

  /** Read-only reload, e.g. after a page refresh on a finalized session. */
  async reload(sessionId: string): Promise<void> {
    this.view = { ...emptyView(), phase: 'loading', sessionId }
    this.emit()
    try {
      const session = await this.client.getSession(sessionId)
      const render = await this.client.getSceneRender(session.scene_id)
      this.view = {
        ...this.view,
        sceneId: session.scene_id,
        svg: render.svg,
        descriptors: render.descriptors,
        policy: session.policy,
      }
      await this.refreshView()
    } catch (err) {
      this.fail(err)
    }
  }
}
