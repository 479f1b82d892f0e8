// DOM wiring for the live episode page.

import { Descriptor, ServiceClient } from './api.js'
import { EpisodeFlow, EpisodeView } from './flow.js'
import {
  bannerHtml,
  descriptorLabel,
  graspHtml,
  overlaySvg,
  roundIndicator,
  transcriptHtml,
} from './view.js'

// matches the service's orthographic camera scale (meters per pixel)
const METERS_PER_PIXEL = 0.00125

const client = new ServiceClient('')
const $ = (id: string) => document.getElementById(id) as HTMLElement

function render(view: EpisodeView): void {
  $('banner').innerHTML = bannerHtml(view.banner)
  $('round').textContent = view.sessionId
    ? `${view.sessionId} — ${roundIndicator(view.round, view.maxRounds)}`
    : ''
  $('transcript').innerHTML = transcriptHtml(
    view.utterance, view.transcript, view.question)
  $('grasp').innerHTML = graspHtml(view.grasp)

  if (view.svg) {
    const marker = view.grasp
      ? { u: view.grasp.x / METERS_PER_PIXEL, v: view.grasp.y / METERS_PER_PIXEL }
      : null
    $('scene').innerHTML = overlaySvg(view.svg, view.candidates, view.estimate, marker)
  }

  const asking = view.phase === 'asking'
  ;($('answer-yes') as HTMLButtonElement).disabled = !asking
  ;($('answer-no') as HTMLButtonElement).disabled = !asking
  ;($('answer-correct') as HTMLButtonElement).disabled = !asking
  ;($('correction') as HTMLSelectElement).disabled = !asking
  ;($('finalize') as HTMLButtonElement).disabled = view.phase !== 'answered'

  const correction = $('correction') as HTMLSelectElement
  if (asking && correction.options.length !== view.descriptors.length) {
    correction.innerHTML = view.descriptors
      .map((d, i) => `<option value="${i}">${descriptorLabel(d)}</option>`)
      .join('')
  }
}

const flow = new EpisodeFlow(client, render)

async function populateScenes(): Promise<void> {
  const { scenes } = await client.listScenes()
  const picker = $('scene-picker') as HTMLSelectElement
  picker.innerHTML = scenes
    .map((s) => `<option value="${s.id}">${s.id} (${s.objects} objects` +
      `${s.clutter_mode ? ', cluttered' : ''})</option>`)
    .join('')
  await populateUtterances()
  picker.addEventListener('change', populateUtterances)
}

async function populateUtterances(): Promise<void> {
  const picker = $('scene-picker') as HTMLSelectElement
  if (!picker.value) return
  const renderDoc = await client.getSceneRender(picker.value)
  const utterances = $('utterance-picker') as HTMLSelectElement
  utterances.innerHTML = renderDoc.utterances
    .map((u) => `<option>${u}</option>`)
    .join('')
  $('scene').innerHTML = renderDoc.svg
}

function currentCorrection(): Descriptor | null {
  const select = $('correction') as HTMLSelectElement
  const index = Number(select.value)
  return Number.isFinite(index) ? flow.view.descriptors[index] ?? null : null
}

function wireControls(): void {
  $('start').addEventListener('click', () => {
    const scene = ($('scene-picker') as HTMLSelectElement).value
    const utterance = ($('utterance-picker') as HTMLSelectElement).value
    const policy = ($('policy-picker') as HTMLSelectElement).value
    void flow.start({ scene_id: scene, utterance, policy, T: 3, lambda: 0.9 })
  })
  $('answer-yes').addEventListener('click', () => {
    void flow.submitAnswer({ polarity: 'yes' })
  })
  $('answer-no').addEventListener('click', () => {
    void flow.submitAnswer({ polarity: 'no' })
  })
  $('answer-correct').addEventListener('click', () => {
    void flow.submitAnswer({ polarity: 'no', correction: currentCorrection() })
  })
  $('finalize').addEventListener('click', () => {
    void flow.finalize()
  })
}

void populateScenes().then(wireControls).catch((err) => {
  $('banner').innerHTML = bannerHtml({
    code: 'engine_error',
    message: `service unreachable: ${err}`,
  })
})
