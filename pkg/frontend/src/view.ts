// Pure rendering helpers: overlay injection into the server's scene SVG,
// transcript markup, banner markup. String in, string out -- easy to
// snapshot-test without a browser.

import { Box, Descriptor, GraspTarget, ScoredCandidate } from './api.js'
import { Banner } from './flow.js'

function rect(box: Box, cls: string, extra = ''): string {
  const [x1, y1, x2, y2] = box
  return (
    `<rect class="${cls}" x="${x1.toFixed(1)}" y="${y1.toFixed(1)}" ` +
    `width="${(x2 - x1).toFixed(1)}" height="${(y2 - y1).toFixed(1)}" ${extra}/>`
  )
}

/** Inject candidate and estimate overlays into the scene SVG. */
export function overlaySvg(
  baseSvg: string,
  candidates: ScoredCandidate[],
  estimate: Box | null,
  graspMarker: { u: number; v: number } | null = null,
): string {
  const parts: string[] = []
  for (const candidate of candidates) {
    const opacity = Math.max(0.15, Math.min(0.9, candidate.prob))
    parts.push(rect(
      candidate.box,
      'candidate',
      `fill="none" stroke="#2266cc" stroke-width="1.2" stroke-dasharray="5,3" stroke-opacity="${opacity.toFixed(2)}"`,
    ))
  }
  if (estimate) {
    parts.push(rect(
      estimate,
      'estimate',
      'fill="none" stroke="#cc2222" stroke-width="3"',
    ))
  }
  if (graspMarker) {
    parts.push(
      `<circle class="grasp" cx="${graspMarker.u.toFixed(1)}" ` +
      `cy="${graspMarker.v.toFixed(1)}" r="6" fill="#cc2222" stroke="#ffffff" stroke-width="2"/>`,
    )
  }
  return baseSvg.replace('</svg>', parts.join('') + '</svg>')
}

export function transcriptHtml(
  utterance: string | null,
  transcript: [string, string][],
  pendingQuestion: string | null,
): string {
  const rows: string[] = []
  if (utterance) {
    rows.push(`<li class="you">You: ${escapeHtml(utterance)}</li>`)
  }
  for (const [question, answer] of transcript) {
    rows.push(`<li class="robot">Robot: ${escapeHtml(question)}</li>`)
    rows.push(`<li class="you">You: ${escapeHtml(answer)}</li>`)
  }
  if (pendingQuestion) {
    rows.push(`<li class="robot pending">Robot: ${escapeHtml(pendingQuestion)}</li>`)
  }
  return `<ul class="transcript">${rows.join('')}</ul>`
}

// every service error code gets its own visual identity
const BANNER_CLASS: Record<string, string> = {
  not_found: 'banner banner-missing',
  invalid_state: 'banner banner-order',
  bad_request: 'banner banner-input',
  engine_error: 'banner banner-engine',
}

const BANNER_TITLE: Record<string, string> = {
  not_found: 'Not found',
  invalid_state: 'Out of order',
  bad_request: 'Bad input',
  engine_error: 'Engine failure',
}

export function bannerHtml(banner: Banner | null): string {
  if (!banner) return ''
  const cls = BANNER_CLASS[banner.code] ?? 'banner banner-engine'
  const title = BANNER_TITLE[banner.code] ?? 'Error'
  return (
    `<div class="${cls}" data-code="${banner.code}">` +
    `<strong>${title}</strong>: ${escapeHtml(banner.message)}</div>`
  )
}

export function graspHtml(grasp: GraspTarget | null): string {
  if (!grasp) return ''
  return (
    '<div class="grasp-panel">Grasp target: ' +
    `(${grasp.x.toFixed(3)}, ${grasp.y.toFixed(3)}, ${grasp.z.toFixed(3)}) m ` +
    `from ${grasp.points_used} points</div>`
  )
}

export function descriptorLabel(descriptor: Descriptor): string {
  return descriptor.attribute
    ? `${descriptor.attribute} ${descriptor.category}`
    : descriptor.category
}

export function roundIndicator(round: number, maxRounds: number): string {
  return `round ${round} / ${maxRounds}`
}

function escapeHtml(text: string): string {
  return text
    .replaceAll('&', '&amp;')
    .replaceAll('<', '&lt;')
    .replaceAll('>', '&gt;')
    .replaceAll('"', '&quot;')
}
