// Typed client for the session service. Every non-2xx response carries a
// {code, message} body; ServiceError preserves the code so the UI can
// render a distinct state per error kind.

export type Box = [number, number, number, number]

export type ErrorCode = 'not_found' | 'invalid_state' | 'bad_request' | 'engine_error'

export class ServiceError extends Error {
  code: ErrorCode
  status: number

  constructor(code: ErrorCode, message: string, status: number) {
    super(message)
    this.code = code
    this.status = status
  }
}

export interface SceneObject {
  id: string
  category: string
  attributes: Record<string, string>
  affordances: string[]
  box: Box
  height_m: number
}

export interface Scene {
  id: string
  width: number
  height: number
  objects: SceneObject[]
  target_id: string
  table_z: number
  clutter_mode: boolean
}

export interface Descriptor {
  category: string
  attribute: string | null
}

export interface SceneRender {
  svg: string
  scene: Scene
  utterances: string[]
  descriptors: Descriptor[]
}

export interface SceneListEntry {
  id: string
  utterance: string | null
  objects: number
  clutter_mode: boolean
}

export interface CreateSessionRequest {
  scene_id?: string
  split?: string
  generator_seed?: number
  utterance?: string
  policy?: string
  lambda?: number
  T?: number
  seed?: number
}

export interface CreateSessionResponse {
  session_id: string
  scene_id: string
  policy: string
  lambda: number
  T: number
  round: number
  question: string | null
  estimate: Box | null
  done: boolean
}

export interface ScoredCandidate {
  box: Box
  prob: number
}

export interface SessionView {
  session_id: string
  scene_id: string
  policy: string
  lambda: number
  T: number
  round: number
  status: 'active' | 'finalized'
  question: string | null
  estimate: Box | null
  per_round_estimates: Box[]
  transcript: [string, string][]
  candidates: ScoredCandidate[]
  done: boolean
  grasp: GraspTarget | null
}

export interface AnswerResponse {
  round: number
  estimate: Box | null
  question: string | null
  done: boolean
}

export interface GraspTarget {
  x: number
  y: number
  z: number
  points_used: number
}

export interface FinalizeResponse {
  estimate: Box
  grasp: GraspTarget
}

export type AnswerBody =
  | { polarity: 'yes' }
  | { polarity: 'no'; correction?: Descriptor | null }
  | { text: string }

export class ServiceClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, init)
    } catch (err) {
      throw new ServiceError('engine_error', `service unreachable: ${err}`, 0)
    }
    const body = await response.json().catch(() => null)
    if (!response.ok) {
      const code = (body?.code ?? 'engine_error') as ErrorCode
      const message = body?.message ?? `HTTP ${response.status}`
      throw new ServiceError(code, message, response.status)
    }
    return body as T
  }

  listScenes(): Promise<{ scenes: SceneListEntry[] }> {
    return this.request('/scenes')
  }

  getScene(sceneId: string): Promise<Scene> {
    return this.request(`/scenes/${sceneId}`)
  }

  getSceneRender(sceneId: string): Promise<SceneRender> {
    return this.request(`/scenes/${sceneId}/render`)
  }

  createSession(body: CreateSessionRequest): Promise<CreateSessionResponse> {
    return this.request('/sessions', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    })
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request(`/sessions/${sessionId}`)
  }

  postAnswer(sessionId: string, body: AnswerBody): Promise<AnswerResponse> {
    return this.request(`/sessions/${sessionId}/answer`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    })
  }

  finalize(sessionId: string): Promise<FinalizeResponse> {
    return this.request(`/sessions/${sessionId}/finalize`, { method: 'POST' })
  }
}
