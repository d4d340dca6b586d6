package shapes;

import java.awt.Color;
import java.awt.Graphics;
import java.awt.event.MouseAdapter;
import java.awt.event.MouseEvent;
import java.util.ArrayList;
import java.util.List;
import javax.swing.JPanel;

public class PaintJPanel extends JPanel {
    private static final long serialVersionUID = 1L;
    private final List<MyShape> shapes = new ArrayList<MyShape>();
    private int currentShapeType = 0;   // 0 line, 1 round rectangle, 2 3D rectangle
    private MyShape currentShape;
    private Color currentColor = Color.BLACK;

    public PaintJPanel() {
        MouseAdapter handler = new MouseAdapter() {
            @Override
            public void mousePressed(MouseEvent e) {
                switch (currentShapeType) {
                    case 0: currentShape = new MyLine(e.getX(), e.getY(), e.getX(), e.getY(), currentColor); break;
                    case 1: currentShape = new MyRoundRectangle(e.getX(), e.getY(), e.getX(), e.getY(), currentColor); break;
                    default: currentShape = new My3DRectangle(e.getX(), e.getY(), e.getX(), e.getY(), currentColor);
                }
            }

            @Override
            public void mouseDragged(MouseEvent e) {
                currentShape.setX2(e.getX());
                currentShape.setY2(e.getY());
                repaint();
            }

            @Override
            public void mouseReleased(MouseEvent e) {
                shapes.add(currentShape);
                currentShape = null;
                repaint();
            }
        };
        addMouseListener(handler);
        addMouseMotionListener(handler);
    }

    @Override
    public void paintComponent(Graphics g) {
        super.paintComponent(g);
        for (MyShape shape : shapes) {
            shape.draw(g);
        }
        if (currentShape != null) {
            currentShape.draw(g);
        }
    }

    public void setCurrentShapeType(int type) { currentShapeType = type; }

    public void setCurrentColor(Color color) { currentColor = color; }

    public void clearLastShape() {
        if (!shapes.isEmpty()) {
            shapes.remove(shapes.size() - 1);
            repaint();
        }
    }

    public void clearDrawing() {
        shapes.clear();
        repaint();
    }
}
