// Rendering helpers: overlay injection, transcript, banner, grasp panel.

import { describe, expect, it } from 'vitest'

import {
  bannerHtml,
  descriptorLabel,
  graspHtml,
  overlaySvg,
  roundIndicator,
  transcriptHtml,
} from '../src/view.js'

const BASE = '<svg xmlns="http://www.w3.org/2000/svg"><rect x="0"/></svg>'

describe('overlaySvg', () => {
  it('injects one dashed rect per candidate and a solid estimate rect', () => {
    const svg = overlaySvg(
      BASE,
      [
        { box: [1, 2, 11, 22], prob: 0.75 },
        { box: [30, 40, 50, 60], prob: 0.25 },
      ],
      [5, 6, 25, 26],
    )
    expect(svg.match(/class="candidate"/g)).toHaveLength(2)
    expect(svg.match(/class="estimate"/g)).toHaveLength(1)
    expect(svg.endsWith('</svg>')).toBe(true)
  })

  it('adds a grasp marker when given one', () => {
    const svg = overlaySvg(BASE, [], null, { u: 240, v: 160 })
    expect(svg).toContain('class="grasp"')
    expect(svg).toContain('cx="240.0"')
  })

  it('is a pure pass-through without overlays', () => {
    expect(overlaySvg(BASE, [], null)).toBe(BASE)
  })
})

describe('transcriptHtml', () => {
  it('keeps server ordering and marks the pending question', () => {
    const html = transcriptHtml(
      'I am thirsty.',
      [['Should I get the mug?', 'No.']],
      'Should I get the can of soda?',
    )
    const mug = html.indexOf('mug')
    const no = html.indexOf('You: No.')
    const soda = html.indexOf('can of soda')
    expect(mug).toBeGreaterThan(-1)
    expect(no).toBeGreaterThan(mug)
    expect(soda).toBeGreaterThan(no)
    expect(html).toContain('pending')
  })

  it('escapes markup in text', () => {
    const html = transcriptHtml('<script>', [], null)
    expect(html).not.toContain('<script>')
    expect(html).toContain('&lt;script&gt;')
  })
})

describe('bannerHtml', () => {
  it('gives each error code a distinct class', () => {
    const classes = new Set(
      ['not_found', 'invalid_state', 'bad_request', 'engine_error'].map((code) => {
        const html = bannerHtml({ code, message: 'x' })
        return html.match(/class="([^"]+)"/)![1]
      }),
    )
    expect(classes.size).toBe(4)
  })

  it('renders nothing without a banner', () => {
    expect(bannerHtml(null)).toBe('')
  })
})

describe('graspHtml', () => {
  it('formats coordinates with three decimals', () => {
    const html = graspHtml({ x: 0.30001, y: 0.2, z: 0.0456789, points_used: 123 })
    expect(html).toContain('(0.300, 0.200, 0.046) m')
    expect(html).toContain('123 points')
  })
})

describe('labels', () => {
  it('renders descriptors and round indicators', () => {
    expect(descriptorLabel({ category: 'candle', attribute: 'pink' })).toBe('pink candle')
    expect(descriptorLabel({ category: 'banana', attribute: null })).toBe('banana')
    expect(roundIndicator(2, 3)).toBe('round 2 / 3')
  })
})
